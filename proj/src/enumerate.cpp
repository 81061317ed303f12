#include "closure/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>

#include "closure/backtrack.hpp"
#include "closure/formulas.hpp"
#include "closure/linalg.hpp"
#include "closure/membership.hpp"
#include "closure/oracle.hpp"

namespace closure {

namespace {

StreamPtr empty_stream(const std::string& algorithm) {
    return std::make_unique<ListStream<BitVector>>(std::vector<BitVector>{}, algorithm, true);
}

std::uint64_t words(std::size_t bits) { return BitVector::word_count(bits) + 1; }

// ------------------------------------------------------------- flashlight

class DeciderFlashlight final : public BoolBacktrack {
public:
    DeciderFlashlight(CloneId c, const Relation& r) : BoolBacktrack("flashlight/" + c.name(), r.width()), rows_(r.size()) {
        for (std::size_t l = 1; l <= r.width(); ++l) deciders_.push_back(make_decider(c, project(r, IndexSet::range(r.width(), 1, l))));
        tick(r.size() * r.width() * r.width());
    }

protected:
    bool root() override { return rows_ > 0; }
    bool push(std::size_t l) override {
        BitVector p(l + 1);
        for (std::size_t i = 0; i <= l; ++i)
            if (values_[i]) p.set(i);
        tick((l + 1) * (rows_ + 1));
        return deciders_[l]->contains(p);
    }

private:
    std::vector<std::unique_ptr<MembershipDecider>> deciders_;
    std::size_t rows_;
};

// -------------------------------------------------------------------- E2

// COMP: rows compatible with the ones of the prefix. COUNT[j] for every zero
// position j: compatible rows with a 0 there. The prefix is in the closure of
// the prefix projection iff COMP is nonempty and every COUNT is positive.
class E2Stream final : public BoolBacktrack {
public:
    explicit E2Stream(const Relation& r)
        : BoolBacktrack("e2-unionfast", r.width()), r_(r), comp_(BitVector::ones(r.size())), count_(r.width(), 0), removed_(r.width()) {
        tick(r.size() * words(r.width()));
    }

protected:
    bool root() override { return !r_.empty(); }
    bool push(std::size_t l) override {
        const BitVector& col = r_.column(l);
        if (values_[l] == 0) {
            tick(words(r_.size()));
            std::size_t c = (comp_ & ~col).count();
            if (c == 0) return false;
            count_[l] = c;
            zeros_.push_back(l);
            return true;
        }
        BitVector removed = comp_ & ~col;
        BitVector kept = comp_ & col;
        tick(2 * words(r_.size()));
        if (kept.none()) return false;
        if (!removed.none()) {
            for (std::size_t j : zeros_) {
                tick(words(r_.size()));
                if (count_[j] == (removed & ~r_.column(j)).count()) return false;
            }
            for (std::size_t j : zeros_) {
                tick(words(r_.size()));
                count_[j] -= (removed & ~r_.column(j)).count();
            }
        }
        comp_ = std::move(kept);
        removed_[l] = std::move(removed);
        return true;
    }
    void pop(std::size_t l) override {
        if (values_[l] == 0) {
            zeros_.pop_back();
            tick();
            return;
        }
        const BitVector& removed = removed_[l];
        if (!removed.none())
            for (std::size_t j : zeros_) {
                tick(words(r_.size()));
                count_[j] += (removed & ~r_.column(j)).count();
            }
        comp_ |= removed;
        tick(words(r_.size()));
    }

private:
    const Relation r_;
    BitVector comp_;
    std::vector<std::size_t> count_;
    std::vector<BitVector> removed_;
    std::vector<std::size_t> zeros_;
};

// ------------------------------------------------------------ Gray walks

// Emits offset + every subset sum of `family` (the family must be free so
// that the sums are distinct), using the loopless reflected Gray code with
// focus pointers.
class GrayStream final : public SolutionStream {
public:
    GrayStream(std::string algorithm, BitVector offset, std::vector<BitVector> family)
        : SolutionStream(std::move(algorithm)), cur_(std::move(offset)), family_(std::move(family)), focus_(family_.size() + 1) {
        std::iota(focus_.begin(), focus_.end(), std::size_t{0});
        tick(family_.size() + 1);
    }

protected:
    bool produce(BitVector& out) override {
        if (!started_) {
            started_ = true;
            tick(words(cur_.width()));
            out = cur_;
            return true;
        }
        const std::size_t k = family_.size();
        std::size_t j = focus_[0];
        focus_[0] = 0;
        if (j == k) return false;
        focus_[j] = focus_[j + 1];
        focus_[j + 1] = j + 1;
        cur_ ^= family_[j];
        tick(2 * words(cur_.width()));
        out = cur_;
        return true;
    }

private:
    BitVector cur_;
    std::vector<BitVector> family_;
    std::vector<std::size_t> focus_;
    bool started_ = false;
};

// Classes of equal columns as masks, skipping all-zero columns and, when
// `skip_ones` is set, all-one columns.
std::vector<BitVector> class_masks(const Relation& r, bool skip_zero, bool skip_ones) {
    std::vector<BitVector> out;
    for (const auto& cls : equal_column_classes(r)) {
        const BitVector& col = r.column(cls.front() - 1);
        if (skip_zero && col.none()) continue;
        if (skip_ones && col.all()) continue;
        BitVector m(r.width());
        for (std::size_t c : cls) m.set(c - 1);
        out.push_back(std::move(m));
    }
    return out;
}

// ------------------------------------------------------------------- M2

class M2Stream final : public SolutionStream {
public:
    explicit M2Stream(const Relation& r) : SolutionStream("m2-hill-climbing"), n_(r.width()) {
        auto atoms = column_atoms(r);
        for (std::size_t i = 0; i < n_; ++i)
            if (atoms[i]) order_.push_back(i);
        // linear extension of atom inclusion
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return atoms[a]->count() < atoms[b]->count(); });
        const std::size_t p = order_.size();
        std::vector<std::size_t> rank(n_, p);
        for (std::size_t k = 0; k < p; ++k) rank[order_[k]] = k;
        atom_.resize(p);
        atom_rank_.resize(p);
        covers_.assign(p, BitVector(p));
        for (std::size_t k = 0; k < p; ++k) {
            const BitVector& a = *atoms[order_[k]];
            atom_[k] = a;
            atom_rank_[k] = BitVector(p);
            for (std::size_t j = a.find_first(); j < n_; j = a.find_next(j + 1)) {
                atom_rank_[k].set(rank[j]);
                covers_[rank[j]].set(k);  // atom k contains coordinate order_[rank[j]]
            }
        }
        zero_ok_ = !r.empty() && intersection_of_all(r).none();
        nonempty_ = !r.empty();
        tick(r.size() * n_ + p * p);
    }

protected:
    bool produce(BitVector& out) override {
        if (!started_) {
            started_ = true;
            if (!nonempty_) return false;
            stack_.push_back({BitVector(n_), BitVector(order_.size()), BitVector::ones(order_.size())});
            if (zero_ok_) {
                out = BitVector(n_);
                tick(words(n_));
                return true;
            }
        }
        while (!stack_.empty()) {
            Frame& f = stack_.back();
            const std::size_t k = f.pending.find_first();
            tick(words(order_.size()));
            if (k >= order_.size()) {
                stack_.pop_back();
                continue;
            }
            Frame child{f.v | atom_[k], f.vr | atom_rank_[k], BitVector()};
            child.pending = f.pending;
            child.pending.and_not(child.vr);
            f.pending.reset(k);
            f.pending.and_not(covers_[k]);
            tick(4 * words(n_));
            out = child.v;
            stack_.push_back(std::move(child));
            return true;
        }
        return false;
    }

private:
    struct Frame {
        BitVector v;        // current solution
        BitVector vr;       // its support in rank space
        BitVector pending;  // ranks still to try, in rank order
    };
    std::size_t n_;
    std::vector<std::size_t> order_;
    std::vector<BitVector> atom_, atom_rank_, covers_;
    std::vector<Frame> stack_;
    bool zero_ok_ = false, nonempty_ = false, started_ = false;
};

// --------------------------------------------------------------- S10/S12

// Lexicographic walk of { base | join of a_j over subsets of J } where each
// element v satisfies v = base | join{a_j : j in J, v_j = 1} and a_j has j.
class UnionWalk {
public:
    UnionWalk(std::size_t n, BitVector base, std::vector<std::size_t> indices, const std::vector<BitVector>* atoms,
              const std::vector<BitVector>* prefix, bool include_base)
        : n_(n), base_(std::move(base)), in_j_(n), atoms_(atoms), prefix_(prefix) {
        for (std::size_t j : indices) in_j_.set(j);
        if (include_base)
            head_ = base_;
        else
            head_ = successor(base_);
    }
    const std::optional<BitVector>& head() const { return head_; }
    void advance(std::uint64_t& ticks) { head_ = successor(*head_, &ticks); }

private:
    std::optional<BitVector> successor(const BitVector& v, std::uint64_t* ticks = nullptr) const {
        for (std::size_t j = n_; j-- > 0;) {
            if (ticks) *ticks += 1;
            if (!in_j_.test(j) || v.test(j)) continue;
            const BitVector& a = (*atoms_)[j];
            if (ticks) *ticks += words(n_);
            if (!(a & (*prefix_)[j]).is_subset_of(v)) continue;
            BitVector w = base_ | a;
            BitVector lower = v & (*prefix_)[j] & in_j_;
            for (std::size_t i = lower.find_first(); i < j; i = lower.find_next(i + 1)) {
                w |= (*atoms_)[i];
                if (ticks) *ticks += words(n_);
            }
            return w;
        }
        return std::nullopt;
    }

    std::size_t n_;
    BitVector base_, in_j_;
    const std::vector<BitVector>* atoms_;
    const std::vector<BitVector>* prefix_;
    std::optional<BitVector> head_;
};

class MergeStream final : public SolutionStream {
public:
    // S10 when `s12` is false.
    MergeStream(const Relation& r, bool s12) : SolutionStream(s12 ? "s12-merge" : "s10-merge") {
        const std::size_t n = r.width();
        prefix_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            prefix_[j] = BitVector(n);
            for (std::size_t i = 0; i < j; ++i) prefix_[j].set(i);
        }
        atoms_.assign(n, BitVector(n));
        BitVector base(n);
        bool include_base = true;
        if (!s12) {
            auto xs = column_atoms(r);
            for (std::size_t i = 0; i < n; ++i)
                if (xs[i]) atoms_[i] = *xs[i];
            include_base = intersection_of_all(r).none();
        } else {
            base = intersection_of_all(r);
            for (const auto& cls : equal_column_classes(r)) {
                BitVector m(n);
                for (std::size_t c : cls) m.set(c - 1);
                for (std::size_t c : cls) atoms_[c - 1] = m;
            }
        }
        for (const auto& s : r.rows()) {
            BitVector j = s;
            if (s12) j.and_not(base);
            walks_.emplace_back(n, base, j.ones_indices(), &atoms_, &prefix_, include_base);
        }
        tick(r.size() * n * words(n));
    }

protected:
    bool produce(BitVector& out) override {
        const BitVector* best = nullptr;
        for (const auto& w : walks_) {
            tick(words(prefix_.size()));
            if (w.head() && (!best || *w.head() < *best)) best = &*w.head();
        }
        if (!best) return false;
        out = *best;
        std::uint64_t t = 0;
        for (auto& w : walks_)
            if (w.head() && *w.head() == out) w.advance(t);
        tick(t);
        return true;
    }

private:
    std::vector<BitVector> atoms_, prefix_;
    std::vector<UnionWalk> walks_;
};

// ----------------------------------------------------------------- kwise

class WindowStream final : public BoolBacktrack {
public:
    WindowStream(CloneId c, const Relation& r) : BoolBacktrack("kwise/" + c.name(), r.width()), ws_(make_window_system(c, r)) {
        tick(ws_.window_count() * (r.size() + ws_.code_count()));
    }

protected:
    bool push(std::size_t l) override {
        std::uint64_t t = 0;
        bool ok = ws_.extend_ok(l, values_.data(), t);
        tick(t);
        return ok;
    }

private:
    WindowSystem ws_;
};

// ------------------------------------------------------------------ lift

class LiftStream final : public SolutionStream {
public:
    LiftStream(StreamPtr inner, ReductionTrace trace)
        : SolutionStream(inner->stats().algorithm, inner->stats().polynomial_delay), inner_(std::move(inner)), trace_(std::move(trace)) {
        for (const auto& s : trace_.steps()) stats_.reductions.push_back(step_name(s.kind));
    }

protected:
    bool produce(BitVector& out) override {
        if (pending_.empty()) {
            BitVector v;
            bool got = inner_->next(v);
            tick(inner_->stats().last_delay_ticks);
            if (!got) return false;
            trace_.lift(v, [&](const BitVector& w) { pending_.push_back(w); });
            tick(pending_.size() * words(trace_.original_width()) * (trace_.steps().size() + 1));
        }
        out = std::move(pending_.front());
        pending_.pop_front();
        return true;
    }

private:
    StreamPtr inner_;
    ReductionTrace trace_;
    std::deque<BitVector> pending_;
};

}  // namespace

StreamPtr flashlight(CloneId c, const Relation& r) { return std::make_unique<DeciderFlashlight>(c, r); }

StreamPtr enum_e2(const Relation& r) { return std::make_unique<E2Stream>(r); }

StreamPtr enum_l0(const Relation& r) {
    if (r.empty()) return empty_stream("l0-gray");
    Gf2Basis basis(r.width());
    std::vector<BitVector> family;
    for (const auto& s : r.rows())
        if (basis.insert(s)) family.push_back(s);
    return std::make_unique<GrayStream>("l0-gray", BitVector(r.width()), std::move(family));
}

StreamPtr enum_l2(const Relation& r) {
    if (r.empty()) return empty_stream("l2-gray");
    const BitVector& r0 = r.row(0);
    Gf2Basis basis(r.width());
    std::vector<BitVector> family;
    for (const auto& s : r.rows()) {
        BitVector d = s ^ r0;
        if (basis.insert(d)) family.push_back(d);
    }
    return std::make_unique<GrayStream>("l2-gray", r0, std::move(family));
}

StreamPtr enum_m2(const Relation& r) { return std::make_unique<M2Stream>(r); }

StreamPtr enum_bf(const Relation& r) {
    if (r.empty()) return empty_stream("bf-gray");
    return std::make_unique<GrayStream>("bf-gray", BitVector(r.width()), class_masks(r, false, false));
}

StreamPtr enum_r_r0(CloneId c, const Relation& r) {
    if (c.tag != CloneTag::R && c.tag != CloneTag::R0) throw InvalidArgument("enum_r_r0 takes R or R0");
    const std::string name = c.tag == CloneTag::R ? "r-gray" : "r0-gray";
    if (r.empty()) return empty_stream(name);
    const bool r_clone = c.tag == CloneTag::R;
    BitVector base = r_clone ? intersection_of_all(r) : BitVector(r.width());
    return std::make_unique<GrayStream>(name, base, class_masks(r, true, r_clone));
}

StreamPtr enum_s10(const Relation& r) { return std::make_unique<MergeStream>(r, false); }
StreamPtr enum_s12(const Relation& r) { return std::make_unique<MergeStream>(r, true); }

StreamPtr enum_d2_via_2sat(const Relation& r) {
    if (r.empty()) return empty_stream("2cnf-scc-flashlight");
    return enum_2cnf_models(r.width(), build_phi_d2(r));
}

StreamPtr enum_kwise(CloneId c, const Relation& r) {
    if (c.tag != CloneTag::D1 && c.tag != CloneTag::S10K && c.tag != CloneTag::S12K && c.tag != CloneTag::D2)
        throw InvalidArgument("enum_kwise takes D1, D2, S10^k or S12^k");
    if (r.empty()) return empty_stream("kwise/" + c.name());
    return std::make_unique<WindowStream>(c, r);
}

StreamPtr enumerate_direct(CloneId c, const Relation& r) {
    switch (c.tag) {
        case CloneTag::I2: return std::make_unique<ListStream<BitVector>>(r.rows(), "i2-rows", true);
        case CloneTag::E2: return enum_e2(r);
        case CloneTag::L0: return enum_l0(r);
        case CloneTag::L2: return enum_l2(r);
        case CloneTag::M2: return enum_m2(r);
        case CloneTag::BF: return enum_bf(r);
        case CloneTag::R:
        case CloneTag::R0: return enum_r_r0(c, r);
        case CloneTag::S10: return enum_s10(r);
        case CloneTag::S12: return enum_s12(r);
        case CloneTag::D2: return enum_d2_via_2sat(r);
        case CloneTag::D1:
        case CloneTag::S10K:
        case CloneTag::S12K: return enum_kwise(c, r);
    }
    throw InvalidArgument("unknown clone");
}

StreamPtr lift_stream(StreamPtr inner, ReductionTrace trace) { return std::make_unique<LiftStream>(std::move(inner), std::move(trace)); }

StreamPtr enumerate(CloneId c, const Relation& r) {
    if (r.empty()) return empty_stream("empty");
    ReducedInstance red = reduce_instance(c, r);
    if (red.trace.empty()) return enumerate_direct(red.clone, red.relation);
    return lift_stream(enumerate_direct(red.clone, red.relation), std::move(red.trace));
}

StreamPtr enumerate(const CloneSpec& spec, const Relation& r) {
    if (const CloneId* c = std::get_if<CloneId>(&spec)) return enumerate(*c, r);
    if (r.empty()) return empty_stream("empty");
    const auto& opsv = std::get<std::vector<OperationTable>>(spec);
    std::optional<ReducedInstance> red;
    try {
        red = reduce_instance(spec, r);
    } catch (const Unsupported&) {
        red.reset();
    }
    if (!red) return std::make_unique<ListStream<BitVector>>(saturate(r, opsv).rows(), "saturation", false);
    if (red->trace.empty()) return enumerate_direct(red->clone, red->relation);
    return lift_stream(enumerate_direct(red->clone, red->relation), std::move(red->trace));
}

}  // namespace closure
