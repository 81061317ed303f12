#include "closure/extremal.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "closure/backtrack.hpp"
#include "closure/enumerate.hpp"
#include "closure/linalg.hpp"
#include "closure/membership.hpp"

namespace closure {

namespace {

std::uint64_t words(std::size_t bits) { return BitVector::word_count(bits) + 1; }

StreamPtr list_stream(std::vector<BitVector> items, const std::string& name, bool poly) {
    return std::make_unique<ListStream<BitVector>>(std::move(items), name, poly);
}

// Inclusion-extremal members; `drop_constants` removes 0 and 1 first.
std::vector<BitVector> filter_extremal(std::vector<BitVector> items, Side side, bool drop_constants) {
    if (drop_constants)
        items.erase(std::remove_if(items.begin(), items.end(), [](const BitVector& v) { return v.none() || v.all(); }), items.end());
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    // Larger (resp. smaller) candidates first, so a survivor is never beaten later.
    std::stable_sort(items.begin(), items.end(), [side](const BitVector& a, const BitVector& b) {
        return side == Side::Max ? a.count() > b.count() : a.count() < b.count();
    });
    std::vector<BitVector> kept;
    for (auto& v : items) {
        bool dominated = std::any_of(kept.begin(), kept.end(), [&](const BitVector& u) {
            return side == Side::Max ? v.is_subset_of(u) : u.is_subset_of(v);
        });
        if (!dominated) kept.push_back(std::move(v));
    }
    return kept;
}

std::vector<BitVector> nonzero_class_masks(const Relation& r) {
    std::vector<BitVector> out;
    for (const auto& cls : equal_column_classes(r)) {
        if (r.column(cls.front() - 1).none()) continue;
        BitVector m(r.width());
        for (std::size_t c : cls) m.set(c - 1);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<BitVector> present_atoms(const Relation& r) {
    std::vector<BitVector> out;
    for (auto& a : column_atoms(r))
        if (a) out.push_back(std::move(*a));
    return out;
}

// Largest element avoiding i, for every i, in a union-closed family of atoms.
std::vector<BitVector> drop_one_unions(const std::vector<BitVector>& atoms, std::size_t n) {
    std::vector<BitVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        BitVector w(n);
        for (const auto& a : atoms)
            if (!a.test(i)) w |= a;
        out.push_back(std::move(w));
    }
    return out;
}

// Rewrites every inner solution; a false return drops it.
class MapStream final : public SolutionStream {
public:
    MapStream(StreamPtr inner, std::function<bool(BitVector&)> map)
        : SolutionStream(inner->stats().algorithm, inner->stats().polynomial_delay), inner_(std::move(inner)), map_(std::move(map)) {}

protected:
    bool produce(BitVector& out) override {
        while (inner_->next(out)) {
            tick(inner_->stats().last_delay_ticks + words(out.width()));
            if (map_(out)) return true;
        }
        tick(inner_->stats().last_delay_ticks);
        return false;
    }

private:
    StreamPtr inner_;
    std::function<bool(BitVector&)> map_;
};

// ------------------------------------------------------------ graph MIS

class GraphMisStream final : public SolutionStream {
public:
    explicit GraphMisStream(const Graph& g) : SolutionStream("graph-mis-reverse-search"), n_(g.n), adj_(g.n, BitVector(g.n)) {
        for (auto [a, b] : g.edges) {
            adj_[a].set(b);
            adj_[b].set(a);
        }
        tick(g.n + g.edges.size());
    }

protected:
    bool produce(BitVector& out) override {
        if (!started_) {
            started_ = true;
            if (n_ == 0) {
                out = BitVector(0);
                return true;
            }
            BitVector s(n_);
            s.set(0);
            if (push(std::move(s), out)) return true;
        } else {
            if (n_ == 0) return false;
            stack_.pop_back();
        }
        const std::uint64_t w = words(n_);
        while (!stack_.empty()) {
            tick(w);
            const std::size_t v = stack_.size();  // next vertex to add
            Frame& f = stack_.back();
            if (f.stage == 0) {
                BitVector child = f.s;
                if (!adj_[v].intersects(f.s)) {
                    f.stage = 2;
                    child.set(v);
                } else {
                    f.stage = 1;
                }
                if (push(std::move(child), out)) return true;
            } else if (f.stage == 1) {
                f.stage = 2;
                BitVector t = f.s;
                t.and_not(adj_[v]);
                t.set(v);
                if (maximal(t, v + 1) && parent(t, v) == f.s && push(std::move(t), out)) return true;
            } else {
                stack_.pop_back();
            }
        }
        return false;
    }

private:
    struct Frame {
        BitVector s;  // maximal independent set of G[0..depth]
        int stage = 0;
    };

    // A frame at depth n-1 is a solution.
    bool push(BitVector s, BitVector& out) {
        if (stack_.size() + 1 == n_) {
            out = s;
            stack_.push_back({std::move(s), 2});
            return true;
        }
        stack_.push_back({std::move(s), 0});
        return false;
    }

    bool maximal(const BitVector& t, std::size_t upto) {
        tick(upto * words(n_));
        for (std::size_t u = 0; u < upto; ++u)
            if (!t.test(u) && !adj_[u].intersects(t)) return false;
        return true;
    }

    // Greedy completion of t - {v} inside G[0..v-1].
    BitVector parent(const BitVector& t, std::size_t v) {
        tick(v * words(n_));
        BitVector p = t;
        p.reset(v);
        for (std::size_t u = 0; u < v; ++u)
            if (!p.test(u) && !adj_[u].intersects(p)) p.set(u);
        return p;
    }

    std::size_t n_;
    std::vector<BitVector> adj_;
    std::vector<Frame> stack_;
    bool started_ = false;
};

// ------------------------------------------------------- hypergraph MIS

class HypergraphMisStream final : public Backtrack<BitVector> {
public:
    explicit HypergraphMisStream(const Hypergraph& h)
        : Backtrack<BitVector>("hypergraph-mis-backtrack", h.n, 2, false), in_(h.n), out_(h.n), by_last_(h.n), containing_(h.n) {
        for (const auto& e : h.edges) {
            BitVector m(h.n);
            for (std::size_t i : e.members()) m.set(i - 1);
            const std::size_t id = edges_.size();
            edges_.push_back(m);
            by_last_[e.members().back() - 1].push_back(id);
            for (std::size_t i : e.members()) containing_[i - 1].push_back(id);
        }
        tick(h.n + edges_.size());
    }

protected:
    bool push(std::size_t l) override {
        const std::uint64_t w = words(n_);
        if (values_[l]) {
            in_.set(l);
            for (std::size_t id : by_last_[l]) {
                tick(w);
                if (edges_[id].is_subset_of(in_)) {
                    in_.reset(l);
                    return false;
                }
            }
        } else {
            out_.set(l);
        }
        // Every excluded vertex still needs an edge whose other vertices can all be chosen.
        for (std::size_t u = out_.find_first(); u < n_; u = out_.find_next(u + 1)) {
            bool blockable = false;
            for (std::size_t id : containing_[u]) {
                tick(w);
                if ((edges_[id] & out_).count() == 1) {
                    blockable = true;
                    break;
                }
            }
            if (!blockable) {
                in_.reset(l);
                out_.reset(l);
                return false;
            }
        }
        return true;
    }

    void pop(std::size_t l) override {
        in_.reset(l);
        out_.reset(l);
    }

    void output(BitVector& out) override { out = in_; }

private:
    BitVector in_, out_;
    std::vector<BitVector> edges_;
    std::vector<std::vector<std::size_t>> by_last_, containing_;
};

// Maximal models of a 2CNF as forced ones plus a maximal independent set of
// the graph of implied (~x | ~y) clauses among the free variables.
StreamPtr mis_models(std::size_t n, const std::vector<Clause2>& clauses) {
    auto reduced = eliminate_positive_by_resolution(n, clauses);
    BitVector forced1(n), forced(n);
    for (const auto& c : reduced) {
        if (c.lits.empty()) return list_stream({}, "graph-mis-reverse-search", true);
        if (c.lits.size() == 1) {
            forced.set(c.lits[0].var);
            if (c.lits[0].positive) forced1.set(c.lits[0].var);
        }
    }
    std::vector<std::size_t> free_vars, index(n, n);
    for (std::size_t x = 0; x < n; ++x)
        if (!forced.test(x)) {
            index[x] = free_vars.size();
            free_vars.push_back(x);
        }
    Graph g;
    g.n = free_vars.size();
    for (const auto& c : reduced) {
        if (c.lits.size() != 2) continue;
        if (c.lits[0].positive || c.lits[1].positive) throw InvalidArgument("resolution left a positive literal");
        g.edges.emplace_back(index[c.lits[0].var], index[c.lits[1].var]);
    }
    return std::make_unique<MapStream>(graph_mis_enum(g), [n, forced1, free_vars](BitVector& v) {
        BitVector full = forced1;
        for (std::size_t i = v.find_first(); i < v.width(); i = v.find_next(i + 1)) full.set(free_vars[i]);
        v = std::move(full);
        return !v.none();
    });
}

std::vector<BitVector> collect_closure(StreamPtr s, const SaturationBudget& budget, const std::string& what) {
    std::vector<BitVector> out;
    BitVector v;
    while (s->next(v)) {
        if (out.size() >= budget.max_elements) throw BudgetExhausted(what + ": closure exceeds " + std::to_string(budget.max_elements) + " elements");
        out.push_back(v);
    }
    return out;
}

void require_rows(const Relation& r, const char* what) {
    if (r.empty()) throw InvalidArgument(std::string(what) + " needs at least one row");
}

StreamPtr extremal_direct(CloneId c, const Relation& r, Side side) {
    const auto tag = c.tag;
    const bool max = side == Side::Max;
    switch (tag) {
        case CloneTag::I2: return list_stream(extremal_filter(r.rows(), side), "i2-filter", true);
        case CloneTag::E2:
        case CloneTag::S10:
        case CloneTag::S12:
        case CloneTag::M2: return list_stream(max_min_trivial(c, r, side), "closed-form", true);
        case CloneTag::R:
        case CloneTag::R0:
            if (!max) return list_stream(max_min_trivial(c, r, side), "closed-form", true);
            return max_models_maj(c, r, side);
        case CloneTag::BF:
        case CloneTag::D2:
        case CloneTag::D1: return max_models_maj(c, r, side);
        case CloneTag::S10K:
        case CloneTag::S12K: {
            if (!max) return list_stream(max_min_trivial(c, r, side), "closed-form", true);
            if (make_decider(c, r)->contains(BitVector::ones(r.width())))
                return list_stream(extremal_bruteforce(c, r, side), "bruteforce-filter", false);
            return std::make_unique<MapStream>(hypergraph_mis_enum(closure_to_hypergraph(r, std::min(c.k, r.width()))),
                                               [](BitVector& v) { return !v.none(); });
        }
        case CloneTag::L0: {
            auto v = max ? max_l0(r) : filter_extremal(min_l0(r), Side::Min, true);
            return list_stream(std::move(v), max ? "l0-bruteforce-filter" : "l0-circuits-bruteforce", false);
        }
        case CloneTag::L2: return list_stream(max ? max_l2(r) : min_l2(r), "l2-bruteforce-filter", false);
    }
    throw InvalidArgument("no extremal routine for " + c.name());
}

}  // namespace

std::size_t Hypergraph::dimension() const {
    std::size_t k = 0;
    for (const auto& e : edges) k = std::max(k, e.size());
    return k;
}

void Hypergraph::validate() const {
    std::set<std::vector<std::size_t>> seen;
    for (const auto& e : edges) {
        if (e.empty()) throw InvalidArgument("hyperedges must be nonempty");
        if (e.width() != n) throw InvalidArgument("hyperedge over a different vertex count");
        if (!seen.insert(e.members()).second) throw InvalidArgument("repeated hyperedge");
    }
}

void Graph::validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) throw InvalidArgument("edge endpoint outside the vertex range");
        if (a == b) throw InvalidArgument("self-loop");
        if (!seen.insert(std::minmax(a, b)).second) throw InvalidArgument("repeated edge");
    }
}

std::vector<BitVector> extremal_filter(std::vector<BitVector> items, Side side) { return filter_extremal(std::move(items), side, true); }

std::vector<BitVector> max_min_trivial(CloneId c, const Relation& r, Side side) {
    if (r.empty()) return {};
    const std::size_t n = r.width();
    const bool ones_row = r.contains(BitVector::ones(n));
    if (side == Side::Max) {
        switch (c.tag) {
            case CloneTag::E2: return extremal_filter(r.rows(), side);
            case CloneTag::M2: {
                auto atoms = present_atoms(r);
                BitVector top = union_of_all(r);
                if (!top.all()) return extremal_filter({top}, side);
                return extremal_filter(drop_one_unions(atoms, n), side);
            }
            case CloneTag::S10:
                // every element lies below a row; with 1 present the closure is Cl_M2
                if (!ones_row) return extremal_filter(r.rows(), side);
                return extremal_filter(drop_one_unions(present_atoms(r), n), side);
            case CloneTag::S12: {
                if (!ones_row) return extremal_filter(r.rows(), side);
                // with 1 present: chi_I plus any union of the other classes
                BitVector fixed = intersection_of_all(r);
                std::vector<BitVector> cand;
                for (const auto& m : nonzero_class_masks(r))
                    if (!m.is_subset_of(fixed)) cand.push_back(~m);
                return extremal_filter(std::move(cand), side);
            }
            default: break;
        }
    } else {
        switch (c.tag) {
            case CloneTag::E2:
            case CloneTag::M2:
            case CloneTag::S10:
            case CloneTag::S10K: return extremal_filter(present_atoms(r), side);
            case CloneTag::S12:
            case CloneTag::S12K:
            case CloneTag::R: {
                BitVector fixed = intersection_of_all(r);
                if (!fixed.none()) return extremal_filter({fixed}, side);
                return extremal_filter(nonzero_class_masks(r), side);
            }
            case CloneTag::R0: return extremal_filter(nonzero_class_masks(r), side);
            default: break;
        }
    }
    throw InvalidArgument("no closed form for " + c.name() + (side == Side::Max ? " max" : " min"));
}

StreamPtr max_models_2cnf(std::size_t n, const std::vector<Clause2>& clauses) {
    if (!satisfies(clauses, BitVector::ones(n))) return mis_models(n, clauses);
    // 1 is a model: every maximal non-1 model avoids some x_i and is maximal among those.
    std::vector<BitVector> cand;
    for (std::size_t i = 0; i < n; ++i) {
        auto with = clauses;
        with.push_back(Clause2{{Literal{i, false}}});
        auto s = mis_models(n, with);
        BitVector v;
        while (s->next(v)) cand.push_back(v);
    }
    return list_stream(extremal_filter(std::move(cand), Side::Max), "graph-mis-per-coordinate", false);
}

StreamPtr max_models_maj(CloneId c, const Relation& r, Side side) {
    switch (c.tag) {
        case CloneTag::D2:
        case CloneTag::D1:
        case CloneTag::M2:
        case CloneTag::BF:
        case CloneTag::R:
        case CloneTag::R0: break;
        default: throw InvalidArgument("max_models_maj needs a clone containing the majority operation, got " + c.name());
    }
    if (r.empty()) return list_stream({}, "graph-mis-reverse-search", true);
    auto phi = build_phi_pairwise(c, r);
    if (side == Side::Max) return max_models_2cnf(r.width(), phi);
    for (auto& cl : phi)
        for (auto& l : cl.lits) l.positive = !l.positive;
    return std::make_unique<MapStream>(max_models_2cnf(r.width(), phi), [](BitVector& v) {
        v = ~v;
        return true;
    });
}

StreamPtr graph_mis_enum(const Graph& g) {
    g.validate();
    return std::make_unique<GraphMisStream>(g);
}

StreamPtr hypergraph_mis_enum(const Hypergraph& h) {
    h.validate();
    return std::make_unique<HypergraphMisStream>(h);
}

Hypergraph closure_to_hypergraph(const Relation& r, std::size_t k) {
    const std::size_t n = r.width();
    if (k == 0 || k > n) throw InvalidArgument("closure_to_hypergraph needs 1 <= k <= n");
    Hypergraph h;
    h.n = n;
    std::vector<std::size_t> members;
    // cover: rows that are all ones on the current members
    std::function<void(std::size_t, const BitVector&)> grow = [&](std::size_t start, const BitVector& cover) {
        for (std::size_t c = start; c < n; ++c) {
            BitVector next = cover & r.column(c);
            members.push_back(c + 1);
            if (next.none()) h.edges.emplace_back(n, members);
            if (members.size() < k) grow(c + 1, next);
            members.pop_back();
        }
    };
    grow(0, BitVector::ones(r.size()));
    return h;
}

Relation hypergraph_to_closure(const Hypergraph& h) {
    h.validate();
    if (h.edges.empty()) throw InvalidArgument("hypergraph_to_closure needs at least one edge");
    const std::size_t k = h.dimension();
    if (k < 2) throw InvalidArgument("hypergraph_to_closure needs edges of size at least 2");
    std::set<std::vector<std::size_t>> edges;
    for (const auto& e : h.edges) {
        if (e.size() != k) throw InvalidArgument("hypergraph_to_closure needs a k-regular hypergraph");
        edges.insert(e.members());
    }
    std::vector<BitVector> rows;
    auto add = [&](const std::vector<std::size_t>& t) {
        BitVector v(h.n);
        for (std::size_t i : t) v.set(i);
        rows.push_back(std::move(v));
    };
    for_each_subset(h.n, k, [&](const std::vector<std::size_t>& t) {
        std::vector<std::size_t> one_based;
        for (std::size_t i : t) one_based.push_back(i + 1);
        if (!edges.count(one_based)) add(t);
    });
    // Sets smaller than k are independent; without them a window I whose
    // k-subsets are all edges would reject an independent set meeting I in
    // fewer than k points.
    for_each_subset(h.n, k - 1, add);
    for (std::size_t i = 0; i < h.n; ++i) rows.push_back(BitVector::unit(h.n, i));
    return Relation(h.n, rows);
}

std::vector<BitVector> min_l0(const Relation& r, SaturationBudget budget) {
    require_rows(r, "min_l0");
    auto span = collect_closure(enum_l0(r), budget, "min_l0");
    span.erase(std::remove_if(span.begin(), span.end(), [](const BitVector& v) { return v.none(); }), span.end());
    return filter_extremal(std::move(span), Side::Min, false);
}

std::vector<BitVector> to_binary_matroid(const Relation& r) {
    Gf2Basis b(r.width());
    for (const auto& v : r.rows()) b.insert(v);
    return b.orthogonal_complement();
}

std::vector<BitVector> min_l2(const Relation& r, SaturationBudget budget) {
    require_rows(r, "min_l2");
    return extremal_filter(collect_closure(enum_l2(r), budget, "min_l2"), Side::Min);
}

std::vector<BitVector> max_l0(const Relation& r, SaturationBudget budget) {
    require_rows(r, "max_l0");
    return extremal_filter(collect_closure(enum_l0(r), budget, "max_l0"), Side::Max);
}

std::vector<BitVector> max_l2(const Relation& r, SaturationBudget budget) {
    require_rows(r, "max_l2");
    return extremal_filter(collect_closure(enum_l2(r), budget, "max_l2"), Side::Max);
}

std::vector<BitVector> extremal_bruteforce(CloneId c, const Relation& r, Side side, SaturationBudget budget) {
    return extremal_filter(saturate_clone(r, c, nullptr, budget).rows(), side);
}

StreamPtr extremal(CloneId c, const Relation& r, Side side) {
    if (r.empty()) return list_stream({}, "empty", true);
    ReducedInstance red = merge_equal_columns(c, r, ReductionTrace(r.width()));
    StreamPtr inner = extremal_direct(red.clone, red.relation, side);
    if (red.trace.empty()) return inner;
    return lift_stream(std::move(inner), std::move(red.trace));
}

Hypergraph read_hypergraph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_content_line(in, line, lineno)) throw FormatError(lineno + 1, "missing \"n e\" header");
    std::istringstream hs(line);
    long long n = -1, e = -1;
    std::string extra;
    if (!(hs >> n >> e) || (hs >> extra) || n < 0 || e < 0) throw FormatError(lineno, "header must be \"n e\" with n, e >= 0");
    Hypergraph h;
    h.n = static_cast<std::size_t>(n);
    std::set<std::vector<std::size_t>> seen;
    for (long long k = 0; k < e; ++k) {
        if (!next_content_line(in, line, lineno)) throw FormatError(lineno + 1, "expected " + std::to_string(e) + " edges, got " + std::to_string(k));
        std::istringstream ls(line);
        std::vector<std::size_t> members;
        std::string tok;
        while (ls >> tok) {
            std::size_t pos = 0;
            unsigned long long x = 0;
            try {
                x = std::stoull(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size() || tok[0] == '-') throw FormatError(lineno, "bad vertex '" + tok + "'");
            if (x < 1 || x > h.n) throw FormatError(lineno, "vertex " + tok + " outside 1.." + std::to_string(h.n));
            members.push_back(static_cast<std::size_t>(x));
        }
        if (members.empty()) throw FormatError(lineno, "empty edge");
        try {
            IndexSet s(h.n, members);
            if (!seen.insert(s.members()).second) throw FormatError(lineno, "repeated edge");
            h.edges.push_back(std::move(s));
        } catch (const InvalidArgument& ex) {
            throw FormatError(lineno, ex.what());
        }
    }
    if (next_content_line(in, line, lineno)) throw FormatError(lineno, "unexpected content after the declared edges");
    return h;
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
    out << h.n << ' ' << h.edges.size() << '\n';
    for (const auto& e : h.edges) {
        const auto& m = e.members();
        for (std::size_t i = 0; i < m.size(); ++i) out << (i ? " " : "") << m[i];
        out << '\n';
    }
}

}  // namespace closure
