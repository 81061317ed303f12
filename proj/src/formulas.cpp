#include "closure/formulas.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "closure/backtrack.hpp"
#include "closure/membership.hpp"
#include "closure/oracle.hpp"

namespace closure {

namespace {

std::string literal_text(const Literal& l) { return (l.positive ? "x" : "~x") + std::to_string(l.var + 1); }

// Literal satisfied exactly when the variable takes the other value than b.
Literal avoid(std::size_t var, bool b) { return {var, !b}; }

}  // namespace

std::string to_string(const Clause2& c) {
    if (c.lits.empty()) return "false";
    std::string s = "(";
    for (std::size_t i = 0; i < c.lits.size(); ++i) s += (i ? " | " : "") + literal_text(c.lits[i]);
    return s + ")";
}

std::string to_string(const DNFClause& t, bool as_term) {
    if (t.empty()) return as_term ? "true" : "false";
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? (as_term ? " & " : " | ") : "") + literal_text(t[i]);
    return s;
}

std::vector<Clause2> build_phi_d2(const Relation& r) { return build_phi_pairwise(CloneId{CloneTag::D2, 0}, r); }

std::vector<Clause2> build_phi_pairwise(CloneId c, const Relation& r) {
    const std::size_t n = r.width();
    std::vector<Clause2> out;
    if (r.empty()) {
        out.push_back({});
        return out;
    }
    const bool closed_form = c.tag == CloneTag::D2 || c.tag == CloneTag::D1;
    if (!closed_form && window_size(c) != 2)
        throw InvalidArgument("build_phi_pairwise needs a clone containing the majority operation, got " + c.name());
    // Admissible patterns of a window (bit t for code t, first coordinate
    // most significant).
    auto closure_mask = [&](const std::vector<std::size_t>& w) {
        std::uint64_t present = 0;
        for (const auto& s : r.rows()) {
            std::uint64_t code = 0;
            for (std::size_t p : w) code = (code << 1) | static_cast<std::uint64_t>(s.test(p));
            present |= std::uint64_t{1} << code;
        }
        if (closed_form) return window_closure_mask(c, w.size(), present);
        std::vector<std::size_t> coords;
        for (std::size_t p : w) coords.push_back(p + 1);
        Relation cl = saturate_clone(project(r, IndexSet(n, coords)), c);
        std::uint64_t mask = 0;
        for (const auto& v : cl.rows()) {
            std::uint64_t code = 0;
            for (std::size_t p = 0; p < w.size(); ++p) code = (code << 1) | static_cast<std::uint64_t>(v.test(p));
            mask |= std::uint64_t{1} << code;
        }
        return mask;
    };
    std::vector<std::uint64_t> unary(n);
    for (std::size_t i = 0; i < n; ++i) {
        unary[i] = closure_mask({i});
        for (std::uint64_t b = 0; b < 2; ++b)
            if (!((unary[i] >> b) & 1U)) out.push_back({{avoid(i, b)}});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::uint64_t m = closure_mask({i, j});
            for (std::uint64_t code = 0; code < 4; ++code) {
                if ((m >> code) & 1U) continue;
                const bool a = (code >> 1) & 1U, b = code & 1U;
                // a missing pair is implied by a missing single value
                if (!((unary[i] >> a) & 1U) || !((unary[j] >> b) & 1U)) continue;
                out.push_back({{avoid(i, a), avoid(j, b)}});
            }
        }
    return out;
}

bool satisfies(const std::vector<Clause2>& clauses, const BitVector& v) {
    for (const auto& c : clauses) {
        bool ok = false;
        for (const auto& l : c.lits)
            if (v.test(l.var) == l.positive) ok = true;
        if (!ok) return false;
    }
    return true;
}

bool satisfies(const std::vector<DNFClause>& terms, const BitVector& v) {
    for (const auto& t : terms) {
        bool ok = true;
        for (const auto& l : t)
            if (v.test(l.var) != l.positive) ok = false;
        if (ok) return true;
    }
    return false;
}

namespace {

void check_clauses(std::size_t n, const std::vector<Clause2>& clauses) {
    for (const auto& c : clauses) {
        if (c.lits.size() > 2) throw InvalidArgument("clause with more than two literals");
        for (const auto& l : c.lits)
            if (l.var >= n) throw InvalidArgument("clause variable outside 1.." + std::to_string(n));
    }
}

// Implication graph in compressed adjacency form; node 2x+b is "x = b".
struct ImplicationGraph {
    std::size_t nodes = 0;
    std::vector<std::size_t> start, adj;
    bool has_empty = false;

    ImplicationGraph(std::size_t n, const std::vector<Clause2>& clauses) : nodes(2 * n) {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& c : clauses) {
            if (c.lits.empty()) {
                has_empty = true;
                continue;
            }
            auto node = [](const Literal& l) { return 2 * l.var + (l.positive ? 1 : 0); };
            auto neg = [](std::size_t u) { return u ^ 1U; };
            if (c.lits.size() == 1) {
                edges.emplace_back(neg(node(c.lits[0])), node(c.lits[0]));
            } else {
                edges.emplace_back(neg(node(c.lits[0])), node(c.lits[1]));
                edges.emplace_back(neg(node(c.lits[1])), node(c.lits[0]));
            }
        }
        start.assign(nodes + 1, 0);
        for (auto& e : edges) ++start[e.first + 1];
        for (std::size_t u = 0; u < nodes; ++u) start[u + 1] += start[u];
        adj.resize(edges.size());
        std::vector<std::size_t> pos(start.begin(), start.end() - 1);
        for (auto& e : edges) adj[pos[e.first]++] = e.second;
    }
};

// Tarjan's SCC test with the first `fixed` variables forced to `values`.
// Returns false when some variable shares a component with its negation.
class Sat2Checker {
public:
    explicit Sat2Checker(const ImplicationGraph& g)
        : g_(g), index_(g.nodes), low_(g.nodes), comp_(g.nodes), on_stack_(g.nodes) {}

    bool check(std::size_t fixed, const unsigned char* values, std::uint64_t& ticks) {
        if (g_.has_empty) return false;
        const std::size_t N = g_.nodes;
        std::fill(index_.begin(), index_.end(), kUnset);
        std::fill(on_stack_.begin(), on_stack_.end(), 0);
        stack_.clear();
        std::size_t counter = 0, comps = 0;
        // forced value b of x adds the edge (x = 1-b) -> (x = b)
        auto extra = [&](std::size_t u) -> std::size_t {
            const std::size_t x = u / 2;
            if (x < fixed && (u & 1U) != values[x]) return u ^ 1U;
            return kUnset;
        };
        for (std::size_t root = 0; root < N; ++root) {
            if (index_[root] != kUnset) continue;
            call_.clear();
            call_.push_back({root, g_.start[root], false});
            index_[root] = low_[root] = counter++;
            stack_.push_back(root);
            on_stack_[root] = 1;
            while (!call_.empty()) {
                Frame& f = call_.back();
                const std::size_t u = f.node;
                std::size_t w = kUnset;
                if (f.edge < g_.start[u + 1]) {
                    w = g_.adj[f.edge++];
                } else if (!f.extra_done) {
                    f.extra_done = true;
                    w = extra(u);
                    if (w == kUnset) continue;
                } else {
                    if (low_[u] == index_[u]) {
                        while (true) {
                            std::size_t x = stack_.back();
                            stack_.pop_back();
                            on_stack_[x] = 0;
                            comp_[x] = comps;
                            ++ticks;
                            if (x == u) break;
                        }
                        ++comps;
                    }
                    call_.pop_back();
                    if (!call_.empty()) {
                        std::size_t p = call_.back().node;
                        low_[p] = std::min(low_[p], low_[u]);
                    }
                    continue;
                }
                ++ticks;
                if (index_[w] == kUnset) {
                    index_[w] = low_[w] = counter++;
                    stack_.push_back(w);
                    on_stack_[w] = 1;
                    call_.push_back({w, g_.start[w], false});
                } else if (on_stack_[w]) {
                    low_[u] = std::min(low_[u], index_[w]);
                }
            }
        }
        for (std::size_t x = 0; x < N / 2; ++x) {
            ++ticks;
            if (comp_[2 * x] == comp_[2 * x + 1]) return false;
        }
        return true;
    }

private:
    static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    struct Frame {
        std::size_t node;
        std::size_t edge;
        bool extra_done;
    };
    const ImplicationGraph& g_;
    std::vector<std::size_t> index_, low_, comp_;
    std::vector<unsigned char> on_stack_;
    std::vector<std::size_t> stack_;
    std::vector<Frame> call_;
};

class TwoCnfStream final : public BoolBacktrack {
public:
    TwoCnfStream(std::size_t n, const std::vector<Clause2>& clauses)
        : BoolBacktrack("2cnf-scc-flashlight", n), graph_(n, clauses), checker_(graph_) {
        tick(clauses.size() + 2 * n);
    }

protected:
    bool root() override { return check(0); }
    bool push(std::size_t l) override { return check(l + 1); }

private:
    bool check(std::size_t fixed) {
        std::uint64_t t = 0;
        bool ok = checker_.check(fixed, values_.data(), t);
        tick(t + graph_.nodes);
        return ok;
    }
    ImplicationGraph graph_;
    Sat2Checker checker_;
};

class DnfStream final : public BoolBacktrack {
public:
    DnfStream(const std::vector<DNFClause>& terms, std::size_t n) : BoolBacktrack("dnf-flashlight", n), alive_(n + 1) {
        // value of each term at each variable: 0, 1, or 2 for absent
        for (const auto& t : terms) {
            std::vector<unsigned char> row(n, 2);
            bool consistent = true;
            for (const auto& l : t) {
                if (l.var >= n) throw InvalidArgument("term variable outside 1.." + std::to_string(n));
                unsigned char v = l.positive ? 1 : 0;
                if (row[l.var] != 2 && row[l.var] != v) consistent = false;
                row[l.var] = v;
            }
            if (consistent) table_.push_back(std::move(row));
        }
        for (std::size_t i = 0; i < table_.size(); ++i) alive_[0].push_back(i);
        tick(table_.size() * (n + 1));
    }

protected:
    bool root() override { return !alive_[0].empty(); }
    bool push(std::size_t l) override {
        auto& next = alive_[l + 1];
        next.clear();
        for (std::size_t t : alive_[l]) {
            tick();
            unsigned char tv = table_[t][l];
            if (tv == 2 || tv == values_[l]) next.push_back(t);
        }
        return !next.empty();
    }

private:
    std::vector<std::vector<unsigned char>> table_;
    std::vector<std::vector<std::size_t>> alive_;  // alive_[l]: terms consistent with the first l values
};

}  // namespace

ImplicationClosure::ImplicationClosure(std::size_t n, const std::vector<Clause2>& clauses) : n_(n) {
    check_clauses(n, clauses);
    ImplicationGraph g(n, clauses);
    const std::size_t N = 2 * n;
    reach_.assign(N, BitVector(N));
    std::vector<std::size_t> queue;
    for (std::size_t s = 0; s < N; ++s) {
        BitVector& seen = reach_[s];
        seen.set(s);
        queue.assign(1, s);
        while (!queue.empty()) {
            std::size_t u = queue.back();
            queue.pop_back();
            for (std::size_t e = g.start[u]; e < g.start[u + 1]; ++e) {
                std::size_t w = g.adj[e];
                if (!seen.test(w)) {
                    seen.set(w);
                    queue.push_back(w);
                }
            }
        }
    }
    sat_ = !g.has_empty;
    for (std::size_t x = 0; x < n && sat_; ++x)
        if (reach_[2 * x].test(2 * x + 1) && reach_[2 * x + 1].test(2 * x)) sat_ = false;
}

std::optional<bool> ImplicationClosure::forced(std::size_t x) const {
    if (reach_[2 * x].test(2 * x + 1)) return true;
    if (reach_[2 * x + 1].test(2 * x)) return false;
    return std::nullopt;
}

bool ImplicationClosure::implies(std::size_t x, bool a, std::size_t y, bool b) const {
    return reach_[2 * x + a].test(2 * y + b);
}

StreamPtr enum_2cnf_models(std::size_t n, const std::vector<Clause2>& clauses) {
    check_clauses(n, clauses);
    return std::make_unique<TwoCnfStream>(n, clauses);
}

StreamPtr enum_dnf_models(const std::vector<DNFClause>& terms, std::size_t n) { return std::make_unique<DnfStream>(terms, n); }

Relation mondnf_to_e2_instance(const std::vector<DNFClause>& terms, std::size_t n) {
    std::vector<BitVector> rows;
    for (const auto& t : terms) {
        BitVector chi(n);
        for (const auto& l : t) {
            if (!l.positive) throw InvalidArgument("mondnf_to_e2_instance needs monotone terms");
            if (l.var >= n) throw InvalidArgument("term variable outside 1.." + std::to_string(n));
            chi.set(l.var);
        }
        rows.push_back(chi);
        for (std::size_t j = 0; j < n; ++j) {
            BitVector v = chi;
            v.set(j);
            rows.push_back(std::move(v));
        }
    }
    return Relation(n, rows);
}

std::vector<Clause2> eliminate_positive_by_resolution(std::size_t n, const std::vector<Clause2>& clauses) {
    ImplicationClosure ic(n, clauses);
    if (!ic.satisfiable()) return {Clause2{}};
    std::vector<Clause2> out;
    std::vector<char> is_free(n, 1);
    for (std::size_t x = 0; x < n; ++x) {
        if (auto f = ic.forced(x)) {
            out.push_back({{Literal{x, *f}}});
            is_free[x] = 0;
        }
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (is_free[x] && is_free[y] && ic.implies(x, true, y, false)) out.push_back({{Literal{x, false}, Literal{y, false}}});
    return out;
}

CnfText read_dimacs(std::istream& in) {
    CnfText f;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '#') continue;
        if (first == "p") {
            std::string kind;
            long long n = -1, c = -1;
            if (header || !(ls >> kind >> n >> c) || (kind != "cnf" && kind != "dnf") || n < 0 || c < 0)
                throw FormatError(lineno, "expected \"p cnf n c\" or \"p dnf n t\"");
            f.dnf = kind == "dnf";
            f.n = static_cast<std::size_t>(n);
            expected = static_cast<std::size_t>(c);
            header = true;
            continue;
        }
        if (!header) throw FormatError(lineno, "missing \"p\" header line");
        std::istringstream items(line);
        long long x;
        std::vector<Literal> cur;
        bool closed = false;
        while (items >> x) {
            if (x == 0) {
                closed = true;
                break;
            }
            std::size_t v = static_cast<std::size_t>(x < 0 ? -x : x);
            if (v > f.n) throw FormatError(lineno, "variable " + std::to_string(v) + " outside 1.." + std::to_string(f.n));
            cur.push_back({v - 1, x > 0});
        }
        if (!closed) throw FormatError(lineno, "clause must end with 0");
        std::string rest;
        if (items >> rest) throw FormatError(lineno, "content after the terminating 0");
        f.items.push_back(std::move(cur));
    }
    if (!header) throw FormatError(lineno + 1, "missing \"p\" header line");
    if (f.items.size() != expected)
        throw FormatError(lineno, "header announces " + std::to_string(expected) + " entries, found " + std::to_string(f.items.size()));
    return f;
}

void write_dimacs(std::ostream& out, const CnfText& f) {
    out << "p " << (f.dnf ? "dnf " : "cnf ") << f.n << ' ' << f.items.size() << '\n';
    for (const auto& c : f.items) {
        for (const auto& l : c) out << (l.positive ? "" : "-") << (l.var + 1) << ' ';
        out << "0\n";
    }
}

}  // namespace closure
