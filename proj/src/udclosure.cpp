#include "closure/udclosure.hpp"

#include <algorithm>

#include "closure/backtrack.hpp"
#include "closure/enumerate.hpp"
#include "closure/membership.hpp"
#include "closure/oracle.hpp"

namespace closure {

namespace {

std::uint64_t words(std::size_t bits) { return BitVector::word_count(bits) + 1; }

BitVector mask_of(const IndexSet& s, std::size_t n) {
    BitVector m(n);
    for (std::size_t i : s.members()) m.set(i - 1);
    return m;
}

bool near_unanimity_route(CloneId c) {
    switch (c.tag) {
        case CloneTag::D2:
        case CloneTag::D1:
        case CloneTag::M2:
        case CloneTag::BF:
        case CloneTag::R:
        case CloneTag::R0:
        case CloneTag::S10K:
        case CloneTag::S12K: return true;
        default: return false;
    }
}

bool closed_form_windows(CloneId c) {
    return c.tag == CloneTag::D2 || c.tag == CloneTag::D1 || c.tag == CloneTag::S10K || c.tag == CloneTag::S12K;
}

// E2 with up/down maps. For a vector v, the usable rows C are those with 1 on
// every coordinate where v is 1 and not up; v is reachable iff C is nonempty
// and every coordinate where v is 0 and not down has a witness 0 in C. For a
// prefix the same test decides extendability: completing with the meet of C
// keeps C unchanged and needs no new witness.
class E2Ud {
public:
    E2Ud(const Relation& r, const UDSpec& ud) : m_(r.size()), up_(mask_of(ud.up, r.width())), down_(mask_of(ud.down, r.width())) {
        for (std::size_t j = 0; j < r.width(); ++j) cols_.push_back(r.column(j));
    }
    std::size_t rows() const { return m_; }
    // C restricted by coordinate j taking value b.
    void restrict(BitVector& c, std::size_t j, bool b) const {
        if (b && !up_.test(j)) c &= cols_[j];
    }
    bool witnessed(const BitVector& c, std::size_t j) const { return down_.test(j) || !c.is_subset_of(cols_[j]); }
    bool needs_witness(std::size_t j, bool b) const { return !b && !down_.test(j); }

private:
    std::size_t m_;
    BitVector up_, down_;
    std::vector<BitVector> cols_;
};

class E2UdStream final : public BoolBacktrack {
public:
    E2UdStream(const Relation& r, const UDSpec& ud) : BoolBacktrack("e2-ud-flashlight", r.width()), e2_(r, ud), cand_(r.width() + 1) {
        cand_[0] = BitVector::ones(r.size());
        tick(r.width() * words(r.size()));
    }

protected:
    bool push(std::size_t l) override {
        const bool b = values_[l];
        BitVector c = cand_[l];
        e2_.restrict(c, l, b);
        tick(words(e2_.rows()));
        if (c.none()) return false;
        const bool shrank = c != cand_[l];
        for (std::size_t j = shrank ? 0 : l; j <= l; ++j) {
            if (!e2_.needs_witness(j, values_[j])) continue;
            tick(words(e2_.rows()));
            if (!e2_.witnessed(c, j)) return false;
        }
        cand_[l + 1] = std::move(c);
        return true;
    }

private:
    E2Ud e2_;
    std::vector<BitVector> cand_;
};

class UdWindowStream final : public BoolBacktrack {
public:
    UdWindowStream(CloneId c, const Relation& r, const UDSpec& ud)
        : BoolBacktrack("kwise-ud/" + c.name(), r.width()), ws_(ud_window_system(c, r, ud)) {
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

StreamPtr single(BitVector v, const std::string& name) {
    return std::make_unique<ListStream<BitVector>>(std::vector<BitVector>{std::move(v)}, name, true);
}

void check_args(CloneId c, const Relation& r, const UDSpec& ud) {
    ud.validate(r.width());
    if (c.tag == CloneTag::S10K || c.tag == CloneTag::S12K) clone_base(c);  // validates k
}

}  // namespace

std::vector<DNFClause> ud_dnf(const Relation& r, const UDSpec& ud) {
    ud.validate(r.width());
    std::vector<DNFClause> terms;
    for (const auto& s : r.rows()) {
        DNFClause t;
        for (std::size_t i = 0; i < r.width(); ++i) {
            if (s.test(i) && !ud.down.contains(i + 1)) t.push_back({i, true});
            if (!s.test(i) && !ud.up.contains(i + 1)) t.push_back({i, false});
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

Relation ud_affine_instance(CloneId c, const Relation& r, const UDSpec& ud) {
    if (c.tag != CloneTag::L0 && c.tag != CloneTag::L2) throw InvalidArgument("ud_affine_instance takes L0 or L2");
    ud.validate(r.width());
    if (r.empty()) return r;
    const std::size_t n = r.width();
    const bool affine = c.tag == CloneTag::L2;
    const BitVector& origin = r.row(0);
    std::vector<BitVector> rows = r.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const BitVector& col = r.column(i);
        bool toggles = false;
        // L0 contains 0, so up_i always yields e^i; down_i needs a row with a 1.
        // In L2 a map is a no-op on a constant column of its own value.
        if (ud.up.contains(i + 1)) toggles = affine ? !col.all() : true;
        if (ud.down.contains(i + 1)) toggles = !col.none();
        if (!toggles) continue;
        BitVector e = BitVector::unit(n, i);
        rows.push_back(affine ? origin ^ e : e);
    }
    return Relation(n, rows);
}

Relation ud_s10_instance(const Relation& r, const UDSpec& ud) {
    ud.validate(r.width());
    if (r.empty()) return r;
    const std::size_t n = r.width();
    const BitVector up = mask_of(ud.up, n), down = mask_of(ud.down, n);
    std::vector<BitVector> rows;
    // every element lies below a raised row
    for (const auto& s : r.rows()) rows.push_back(s | up);
    BitVector bottom = intersection_of_all(r);
    bottom.and_not(down);
    rows.push_back(bottom);
    for (std::size_t i = 0; i < n; ++i) {
        const BitVector& col = r.column(i);
        if (col.none() && !up.test(i)) continue;
        BitVector atom = BitVector::ones(n);
        for (std::size_t t = col.find_first(); t < r.size(); t = col.find_next(t + 1)) atom &= r.row(t);
        if (up.test(i)) {
            BitVector raised = bottom;
            raised.set(i);
            atom &= raised;
        }
        BitVector others = down;
        others.reset(i);
        atom.and_not(others);
        rows.push_back(std::move(atom));
    }
    return Relation(n, rows);
}

ReducedInstance ud_s12_instance(const Relation& r, const UDSpec& ud) {
    ud.validate(r.width());
    const std::size_t n = r.width();
    const CloneId s12{CloneTag::S12, 0};
    if (r.empty()) return {s12, r, ReductionTrace(n)};
    std::vector<BitVector> rows = r.rows();
    for (std::size_t i : ud.down.members()) {
        const BitVector& col = r.column(i - 1);
        if (col.none()) continue;
        BitVector lowered = r.row(col.find_first());
        lowered.reset(i - 1);
        rows.push_back(std::move(lowered));
    }
    // An up coordinate with a 0 somewhere can be set and cleared at will:
    // x & ~(up_i(w) & ~w) clears it using any w with w_i = 0.
    std::vector<std::size_t> keep, drop;
    for (std::size_t i = 1; i <= n; ++i) (ud.up.contains(i) && !r.column(i - 1).all() ? drop : keep).push_back(i);
    Relation augmented(n, rows);
    ReductionTrace trace(n);
    for (auto it = drop.rbegin(); it != drop.rend(); ++it) trace.push({StepKind::DropFreeColumn, {}, *it});
    if (drop.empty()) return {s12, augmented, trace};
    return {s12, project(augmented, IndexSet(n, keep)), trace};
}

WindowSystem ud_window_system(CloneId c, const Relation& r, const UDSpec& ud) {
    if (!near_unanimity_route(c)) throw InvalidArgument("ud_window_system needs a clone with a near-unanimity operation, got " + c.name());
    check_args(c, r, ud);
    if (r.empty()) throw InvalidArgument("ud_window_system needs a nonempty relation");
    const std::size_t n = r.width(), k = window_size(c);
    const auto base = clone_base(c);
    return WindowSystem(n, k, 2, [&](const std::vector<std::size_t>& w) {
        const std::size_t kw = w.size();
        std::vector<std::size_t> members;
        for (std::size_t p : w) members.push_back(p + 1);
        if (!closed_form_windows(c)) {
            std::vector<std::size_t> up, down;
            for (std::size_t p = 0; p < kw; ++p) {
                if (ud.up.contains(w[p] + 1)) up.push_back(p + 1);
                if (ud.down.contains(w[p] + 1)) down.push_back(p + 1);
            }
            UDSpec local{IndexSet(kw, up), IndexSet(kw, down)};
            Relation sat = saturate(project(r, IndexSet(n, members)), base, &local);
            WindowSystem::Mask m(1, 0);
            for (const auto& v : sat.rows()) {
                std::size_t code = 0;
                for (std::size_t p = 0; p < kw; ++p) code = (code << 1) | static_cast<std::size_t>(v.test(p));
                WindowSystem::mask_set(m, code);
            }
            return m;
        }
        // Alternate the clone's window closure with the unary maps until stable.
        std::uint64_t set_bits = 0, clear_bits = 0, present = 0;
        for (std::size_t p = 0; p < kw; ++p) {
            const std::uint64_t bit = std::uint64_t{1} << (kw - 1 - p);
            if (ud.up.contains(w[p] + 1)) set_bits |= bit;
            if (ud.down.contains(w[p] + 1)) clear_bits |= bit;
        }
        for (const auto& s : r.rows()) {
            std::uint64_t code = 0;
            for (std::size_t p : w) code = (code << 1) | static_cast<std::uint64_t>(s.test(p));
            present |= std::uint64_t{1} << code;
        }
        const std::size_t codes = std::size_t{1} << kw;
        while (true) {
            std::uint64_t closed = window_closure_mask(c, kw, present), grown = closed;
            for (std::size_t t = 0; t < codes; ++t) {
                if (!((closed >> t) & 1U)) continue;
                for (std::uint64_t b = set_bits; b; b &= b - 1) grown |= std::uint64_t{1} << (t | (b & -b));
                for (std::uint64_t b = clear_bits; b; b &= b - 1) grown |= std::uint64_t{1} << (t & ~(b & -b));
            }
            if (grown == present) break;
            present = grown;
        }
        return WindowSystem::Mask{present};
    });
}

bool member_ud(CloneId c, const Relation& r, const UDSpec& ud, const BitVector& v) {
    check_args(c, r, ud);
    if (v.width() != r.width()) throw InvalidArgument("vector width differs from relation width");
    if (r.empty()) return false;
    switch (c.tag) {
        case CloneTag::I2: return satisfies(ud_dnf(r, ud), v);
        case CloneTag::E2: {
            E2Ud e2(r, ud);
            BitVector cand = BitVector::ones(r.size());
            for (std::size_t j = 0; j < r.width(); ++j) e2.restrict(cand, j, v.test(j));
            if (cand.none()) return false;
            for (std::size_t j = 0; j < r.width(); ++j)
                if (e2.needs_witness(j, v.test(j)) && !e2.witnessed(cand, j)) return false;
            return true;
        }
        case CloneTag::L0:
        case CloneTag::L2: return member(c, ud_affine_instance(c, r, ud), v);
        case CloneTag::S10: return member_s10(ud_s10_instance(r, ud), v);
        case CloneTag::S12: {
            ReducedInstance red = ud_s12_instance(r, ud);
            BitVector rv = *red.trace.reduce_vector(v);
            return rv.width() == 0 || member_s12(red.relation, rv);
        }
        default: break;
    }
    std::vector<unsigned char> vals(v.width());
    for (std::size_t i = 0; i < v.width(); ++i) vals[i] = v.test(i);
    return ud_window_system(c, r, ud).contains(vals.data());
}

StreamPtr enum_ud(CloneId c, const Relation& r, const UDSpec& ud) {
    check_args(c, r, ud);
    if (ud.empty()) return enumerate(c, r);
    if (r.empty()) return std::make_unique<ListStream<BitVector>>(std::vector<BitVector>{}, "empty", true);
    switch (c.tag) {
        case CloneTag::I2: return enum_dnf_models(ud_dnf(r, ud), r.width());
        case CloneTag::E2: return std::make_unique<E2UdStream>(r, ud);
        case CloneTag::L0: return enum_l0(ud_affine_instance(c, r, ud));
        case CloneTag::L2: return enum_l2(ud_affine_instance(c, r, ud));
        case CloneTag::S10: return enum_s10(ud_s10_instance(r, ud));
        case CloneTag::S12: {
            ReducedInstance red = ud_s12_instance(r, ud);
            StreamPtr inner = red.relation.width() == 0 ? single(BitVector(0), "s12-free") : enum_s12(red.relation);
            if (red.trace.empty()) return inner;
            return lift_stream(std::move(inner), std::move(red.trace));
        }
        default: break;
    }
    return std::make_unique<UdWindowStream>(c, r, ud);
}

}  // namespace closure
