#include "closure/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace closure {

SaturationBudget default_budget() {
    SaturationBudget b;
    if (const char* env = std::getenv("CLOSURE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) b.max_elements = static_cast<std::size_t>(v);
    }
    return b;
}

namespace {

// Per-position equivalence classes of argument prefixes: two prefixes are
// equivalent when they leave the same residual function. Lets the whole
// image f(C^t) be computed layer by layer over per-coordinate class ids.
struct ResidualAutomaton {
    std::size_t t = 0, d = 2;
    std::vector<std::vector<std::vector<std::uint32_t>>> trans;  // [depth][class][digit]
    std::vector<std::uint8_t> output;                           // class at depth t -> value
    std::size_t max_classes = 1;

    explicit ResidualAutomaton(const OperationTable& f) : t(f.arity()), d(f.domain_size()) {
        std::vector<std::vector<std::size_t>> rep(t + 1);  // representative prefix per class
        std::vector<std::vector<std::uint32_t>> cls_of(t + 1);
        std::size_t block = 1;
        for (std::size_t i = 0; i < t; ++i) block *= d;
        std::size_t prefixes = 1;
        for (std::size_t j = 0; j <= t; ++j) {
            std::map<std::vector<std::uint8_t>, std::uint32_t> ids;
            cls_of[j].resize(prefixes);
            for (std::size_t p = 0; p < prefixes; ++p) {
                std::vector<std::uint8_t> res(f.table().begin() + static_cast<std::ptrdiff_t>(p * block),
                                              f.table().begin() + static_cast<std::ptrdiff_t>((p + 1) * block));
                auto [it, fresh] = ids.emplace(std::move(res), static_cast<std::uint32_t>(rep[j].size()));
                if (fresh) rep[j].push_back(p);
                cls_of[j][p] = it->second;
            }
            max_classes = std::max(max_classes, rep[j].size());
            if (j < t) {
                prefixes *= d;
                block /= d;
            }
        }
        trans.resize(t);
        for (std::size_t j = 0; j < t; ++j) {
            trans[j].assign(rep[j].size(), std::vector<std::uint32_t>(d));
            for (std::size_t c = 0; c < rep[j].size(); ++c)
                for (std::size_t x = 0; x < d; ++x) trans[j][c][x] = cls_of[j + 1][rep[j][c] * d + x];
        }
        output.resize(rep[t].size());
        for (std::size_t c = 0; c < rep[t].size(); ++c) output[c] = f.table()[rep[t][c]];
    }
};

std::size_t bits_for(std::size_t classes) {
    std::size_t b = 1;
    while ((std::size_t{1} << b) < classes) ++b;
    return b;
}

// Image of op over all t-tuples of elements, computed through the residual
// automaton. digit(e, s) reads coordinate s of element e.
template <class Digit>
std::vector<std::vector<std::uint8_t>> layered_image(std::size_t count, std::size_t n, const OperationTable& op,
                                                     const ResidualAutomaton& A, const Digit& digit) {
    const std::size_t bits = bits_for(A.max_classes);
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    std::unordered_set<std::uint64_t> layer{0};
    for (std::size_t j = 0; j < op.arity(); ++j) {
        std::unordered_set<std::uint64_t> next;
        next.reserve(layer.size() * 2);
        for (std::uint64_t st : layer) {
            for (std::size_t e = 0; e < count; ++e) {
                std::uint64_t ns = 0;
                for (std::size_t s = 0; s < n; ++s) {
                    std::uint64_t c = (st >> (s * bits)) & mask;
                    ns |= std::uint64_t{A.trans[j][c][digit(e, s)]} << (s * bits);
                }
                next.insert(ns);
            }
        }
        layer.swap(next);
    }
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(layer.size());
    for (std::uint64_t st : layer) {
        std::vector<std::uint8_t> v(n);
        for (std::size_t s = 0; s < n; ++s) v[s] = A.output[(st >> (s * bits)) & mask];
        out.push_back(std::move(v));
    }
    return out;
}

bool layered_fits(std::size_t n, const ResidualAutomaton& A) { return n * bits_for(A.max_classes) <= 64; }

// Visits index tuples over [0,hi)^t with at least one index >= lo; for
// symmetric ops only nondecreasing tuples.
template <class F>
void for_each_new_tuple(std::size_t t, std::size_t lo, std::size_t hi, bool symmetric, const F& f) {
    if (hi <= lo) return;
    std::vector<std::size_t> idx(t);
    if (t == 0) return;
    if (symmetric) {
        // nondecreasing, last index in [lo,hi)
        for (std::size_t last = lo; last < hi; ++last) {
            idx[t - 1] = last;
            if (t == 1) {
                f(idx);
                continue;
            }
            std::fill(idx.begin(), idx.end() - 1, 0);
            while (true) {
                f(idx);
                // rightmost head position that can still grow
                std::size_t p = t - 1;
                while (p > 0 && idx[p - 1] >= last) --p;
                if (p == 0) break;
                --p;
                ++idx[p];
                for (std::size_t q = p + 1; q + 1 < t; ++q) idx[q] = idx[p];
            }
        }
        return;
    }
    // first position holding a new index is `first`
    for (std::size_t first = 0; first < t; ++first) {
        std::vector<std::size_t> lower(t), upper(t);
        for (std::size_t p = 0; p < t; ++p) {
            if (p < first) {
                lower[p] = 0;
                upper[p] = lo;
            } else if (p == first) {
                lower[p] = lo;
                upper[p] = hi;
            } else {
                lower[p] = 0;
                upper[p] = hi;
            }
            if (lower[p] >= upper[p]) goto next_first;
        }
        for (std::size_t p = 0; p < t; ++p) idx[p] = lower[p];
        while (true) {
            f(idx);
            std::size_t p = t;
            while (p > 0) {
                --p;
                if (++idx[p] < upper[p]) break;
                idx[p] = lower[p];
                if (p == 0) {
                    p = t;
                    break;
                }
            }
            if (p == t) break;
        }
    next_first:;
    }
}

class BoolClosure {
public:
    BoolClosure(std::size_t n, SaturationBudget b) : n_(n), budget_(b) {}

    bool add(const BitVector& v) {
        if (!index_.insert(v).second) return false;
        elems_.push_back(v);
        if (elems_.size() > budget_.max_elements)
            throw BudgetExhausted("saturation exceeded " + std::to_string(budget_.max_elements) + " elements");
        return true;
    }
    std::vector<BitVector>& elems() { return elems_; }
    std::size_t size() const { return elems_.size(); }

private:
    std::size_t n_;
    SaturationBudget budget_;
    std::vector<BitVector> elems_;
    std::unordered_set<BitVector, BitVectorHash> index_;
};

}  // namespace

Relation saturate(const Relation& r, const std::vector<OperationTable>& ops, const UDSpec* ud, SaturationBudget budget) {
    const std::size_t n = r.width();
    for (const auto& op : ops)
        if (op.domain_size() != 2) throw InvalidArgument("saturate: operation " + op.name() + " is not boolean");
    if (ud) ud->validate(n);

    BoolClosure C(n, budget);
    for (const auto& v : r.rows()) C.add(v);
    // Nullary operations contribute constant vectors.
    for (const auto& op : ops)
        if (op.arity() == 0) C.add(op.at(0) ? BitVector::ones(n) : BitVector(n));

    std::vector<const OperationTable*> small, large;
    std::vector<ResidualAutomaton> automata;
    for (const auto& op : ops) {
        if (op.arity() == 0) continue;
        if (op.arity() <= 3) {
            small.push_back(&op);
        } else {
            ResidualAutomaton A(op);
            if (layered_fits(n, A)) {
                large.push_back(&op);
                automata.push_back(std::move(A));
            } else {
                small.push_back(&op);
            }
        }
    }

    std::size_t lo = 0;
    std::size_t rounds = 0;
    std::vector<const BitVector*> args;
    while (lo < C.size()) {
        if (++rounds > budget.max_rounds) throw BudgetExhausted("saturation exceeded the round budget");
        const std::size_t hi = C.size();
        if (ud) {
            for (std::size_t e = lo; e < hi; ++e) {
                for (std::size_t i : ud->up.members()) {
                    BitVector w = C.elems()[e];
                    w.set(i - 1);
                    C.add(w);
                }
                for (std::size_t i : ud->down.members()) {
                    BitVector w = C.elems()[e];
                    w.reset(i - 1);
                    C.add(w);
                }
            }
        }
        for (const OperationTable* op : small) {
            args.assign(op->arity(), nullptr);
            for_each_new_tuple(op->arity(), lo, hi, op->is_symmetric(), [&](const std::vector<std::size_t>& idx) {
                for (std::size_t p = 0; p < idx.size(); ++p) args[p] = &C.elems()[idx[p]];
                C.add(op->apply(args));
            });
        }
        for (std::size_t a = 0; a < large.size(); ++a) {
            const std::size_t count = C.size();
            const auto& elems = C.elems();
            auto image = layered_image(count, n, *large[a], automata[a],
                                       [&](std::size_t e, std::size_t s) -> std::size_t { return elems[e].test(s) ? 1 : 0; });
            for (const auto& digits : image) {
                BitVector v(n);
                for (std::size_t s = 0; s < n; ++s)
                    if (digits[s]) v.set(s);
                C.add(v);
            }
        }
        lo = hi;
    }
    return Relation(n, C.elems());
}

// ------------------------------------------------------------ DomainRelation

namespace {
std::string key_of(const DomainVector& v) { return std::string(v.begin(), v.end()); }
}  // namespace

DomainRelation::DomainRelation(std::size_t width, std::size_t d, const std::vector<DomainVector>& rows) : width_(width), d_(d) {
    if (d < 2) throw InvalidArgument("domain size must be at least 2");
    for (const auto& v : rows) {
        if (v.size() != width) throw InvalidArgument("domain row width differs from relation width");
        for (auto x : v)
            if (x >= d) throw InvalidArgument("domain value out of range");
        if (index_.insert(key_of(v)).second) rows_.push_back(v);
    }
}

DomainRelation DomainRelation::from_strings(std::size_t d, const std::vector<std::string>& rows) {
    std::vector<DomainVector> v;
    for (const auto& s : rows) v.push_back(domain_vector_from_string(s, d));
    return DomainRelation(rows.empty() ? 0 : rows.front().size(), d, v);
}

DomainRelation DomainRelation::from_boolean(const Relation& r) {
    std::vector<DomainVector> rows;
    for (const auto& v : r.rows()) {
        DomainVector x(r.width());
        for (std::size_t i = 0; i < r.width(); ++i) x[i] = v.test(i) ? 1 : 0;
        rows.push_back(std::move(x));
    }
    return DomainRelation(r.width(), 2, rows);
}

bool DomainRelation::contains(const DomainVector& v) const { return index_.count(key_of(v)) != 0; }

DomainRelation DomainRelation::project(const std::vector<std::size_t>& coords0) const {
    std::vector<DomainVector> rows;
    for (const auto& v : rows_) {
        DomainVector x;
        x.reserve(coords0.size());
        for (std::size_t c : coords0) x.push_back(v.at(c));
        rows.push_back(std::move(x));
    }
    return DomainRelation(coords0.size(), d_, rows);
}

std::vector<std::string> DomainRelation::to_strings() const {
    std::vector<std::string> out;
    for (const auto& v : rows_) out.push_back(to_string(v));
    return out;
}

std::string to_string(const DomainVector& v) {
    std::string s;
    for (auto x : v) s.push_back(static_cast<char>('0' + x));
    return s;
}

DomainVector domain_vector_from_string(const std::string& s, std::size_t d) {
    DomainVector v;
    for (char c : s) {
        if (c < '0' || c > '9' || static_cast<std::size_t>(c - '0') >= d)
            throw InvalidArgument("invalid digit in domain vector: " + s);
        v.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return v;
}

DomainRelation saturate_domain(const DomainRelation& r, const std::vector<OperationTable>& ops, SaturationBudget budget) {
    const std::size_t n = r.width(), d = r.domain_size();
    for (const auto& op : ops)
        if (op.domain_size() != d) throw InvalidArgument("saturate_domain: operation domain differs from relation domain");
    std::vector<DomainVector> elems;
    std::unordered_set<std::string> index;
    auto add = [&](DomainVector v) {
        if (!index.insert(key_of(v)).second) return;
        elems.push_back(std::move(v));
        if (elems.size() > budget.max_elements) throw BudgetExhausted("domain saturation exceeded the element budget");
    };
    for (const auto& v : r.rows()) add(v);
    for (const auto& op : ops)
        if (op.arity() == 0) add(DomainVector(n, op.at(0)));

    std::vector<const OperationTable*> small, large;
    std::vector<ResidualAutomaton> automata;
    for (const auto& op : ops) {
        if (op.arity() == 0) continue;
        ResidualAutomaton A(op);
        if (op.arity() >= 4 && layered_fits(n, A)) {
            large.push_back(&op);
            automata.push_back(std::move(A));
        } else {
            small.push_back(&op);
        }
    }
    std::size_t lo = 0, rounds = 0;
    std::vector<std::uint8_t> in;
    while (lo < elems.size()) {
        if (++rounds > budget.max_rounds) throw BudgetExhausted("domain saturation exceeded the round budget");
        const std::size_t hi = elems.size();
        for (const OperationTable* op : small) {
            const std::size_t t = op->arity();
            in.assign(t, 0);
            for_each_new_tuple(t, lo, hi, op->is_symmetric(), [&](const std::vector<std::size_t>& idx) {
                DomainVector out(n);
                for (std::size_t s = 0; s < n; ++s) {
                    std::size_t code = 0;
                    for (std::size_t p = 0; p < t; ++p) code = code * d + elems[idx[p]][s];
                    out[s] = op->at(code);
                }
                add(std::move(out));
            });
        }
        for (std::size_t a = 0; a < large.size(); ++a) {
            const std::size_t count = elems.size();
            auto image = layered_image(count, n, *large[a], automata[a],
                                       [&](std::size_t e, std::size_t s) -> std::size_t { return elems[e][s]; });
            for (auto& v : image) add(DomainVector(v.begin(), v.end()));
        }
        lo = hi;
    }
    return DomainRelation(n, d, elems);
}

Relation saturate_clone(const Relation& r, CloneId c, const UDSpec* ud, SaturationBudget budget) {
    return saturate(r, clone_base(c), ud, budget);
}

}  // namespace closure
