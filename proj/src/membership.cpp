#include "closure/membership.hpp"

#include <unordered_set>

#include "closure/linalg.hpp"

namespace closure {

void MembershipDecider::check_width(const BitVector& v) const {
    if (v.width() != width_)
        throw InvalidArgument("vector has width " + std::to_string(v.width()) + ", relation has width " + std::to_string(width_));
}

std::vector<std::optional<BitVector>> column_atoms(const Relation& r) {
    std::vector<std::optional<BitVector>> atoms(r.width());
    for (const auto& s : r.rows()) {
        for (std::size_t i = s.find_first(); i < r.width(); i = s.find_next(i + 1)) {
            if (atoms[i])
                *atoms[i] &= s;
            else
                atoms[i] = s;
        }
    }
    return atoms;
}

namespace {

class EmptyDecider final : public MembershipDecider {
public:
    EmptyDecider(CloneId c, std::size_t n) : MembershipDecider(c, n) {}
    bool contains(const BitVector& v) const override {
        check_width(v);
        return false;
    }
};

class I2Decider final : public MembershipDecider {
public:
    I2Decider(const Relation& r) : MembershipDecider({CloneTag::I2, 0}, r.width()), r_(r) {}
    bool contains(const BitVector& v) const override {
        check_width(v);
        return r_.contains(v);
    }

private:
    Relation r_;
};

class E2Decider final : public MembershipDecider {
public:
    E2Decider(const Relation& r) : MembershipDecider({CloneTag::E2, 0}, r.width()), r_(r) {}
    bool contains(const BitVector& v) const override {
        check_width(v);
        BitVector acc = BitVector::ones(width());
        bool any = false;
        for (const auto& s : r_.rows()) {
            if (v.is_subset_of(s)) {
                acc &= s;
                any = true;
            }
        }
        return any && acc == v;
    }

private:
    Relation r_;
};

class AffineDecider final : public MembershipDecider {
public:
    // With `affine` set, decides v - r0 in span{r_i - r0}; otherwise v in span{r_i}.
    AffineDecider(const Relation& r, bool affine)
        : MembershipDecider({affine ? CloneTag::L2 : CloneTag::L0, 0}, r.width()), basis_(r.width()), affine_(affine) {
        offset_ = affine ? r.row(0) : BitVector(r.width());
        for (const auto& s : r.rows()) basis_.insert(s ^ offset_);
    }
    bool contains(const BitVector& v) const override {
        check_width(v);
        return basis_.in_span(v ^ offset_);
    }

private:
    Gf2Basis basis_;
    BitVector offset_;
    bool affine_;
};

class M2Decider final : public MembershipDecider {
public:
    M2Decider(const Relation& r) : MembershipDecider({CloneTag::M2, 0}, r.width()), atoms_(column_atoms(r)) {
        zero_ok_ = intersection_of_all(r).none();
    }
    bool contains(const BitVector& v) const override {
        check_width(v);
        if (v.none()) return zero_ok_;
        BitVector u(width());
        for (std::size_t i = v.find_first(); i < width(); i = v.find_next(i + 1)) {
            if (!atoms_[i]) return false;
            u |= *atoms_[i];
        }
        return u == v;
    }

private:
    std::vector<std::optional<BitVector>> atoms_;
    bool zero_ok_ = false;
};

// BF, R, R0: v must be constant on equal-column classes; R and R0 force the
// all-zero class to 0 and R forces the all-one class to 1.
class ClassDecider final : public MembershipDecider {
public:
    ClassDecider(CloneId c, const Relation& r) : MembershipDecider(c, r.width()), classes_(equal_column_classes(r)) {
        zero_ = BitVector(r.width());
        one_ = BitVector(r.width());
        if (c.tag == CloneTag::R || c.tag == CloneTag::R0) {
            BitVector any = union_of_all(r);
            zero_ = ~any;
        }
        if (c.tag == CloneTag::R) one_ = intersection_of_all(r);
    }
    bool contains(const BitVector& v) const override {
        check_width(v);
        if (v.intersects(zero_) || !one_.is_subset_of(v)) return false;
        for (const auto& cls : classes_) {
            const bool b = v.test(cls.front() - 1);
            for (std::size_t c : cls)
                if (v.test(c - 1) != b) return false;
        }
        return true;
    }

private:
    std::vector<std::vector<std::size_t>> classes_;
    BitVector zero_, one_;
};

class S10Decider final : public MembershipDecider {
public:
    S10Decider(const Relation& r) : MembershipDecider({CloneTag::S10, 0}, r.width()), r_(r), atoms_(column_atoms(r)) {
        zero_ok_ = intersection_of_all(r).none();
    }
    bool contains(const BitVector& v) const override {
        check_width(v);
        if (v.none()) return zero_ok_;
        BitVector u(width());
        for (std::size_t i = v.find_first(); i < width(); i = v.find_next(i + 1)) {
            if (!atoms_[i]) return false;
            u |= *atoms_[i];
        }
        for (const auto& s : r_.rows())
            if (v.is_subset_of(s) && (u & s) == v) return true;
        return false;
    }

private:
    Relation r_;
    std::vector<std::optional<BitVector>> atoms_;
    bool zero_ok_ = false;
};

class S12Decider final : public MembershipDecider {
public:
    S12Decider(const Relation& r) : MembershipDecider({CloneTag::S12, 0}, r.width()), r_(r) {
        ones_ = intersection_of_all(r);
        class_of_.resize(r.width());
        for (const auto& cls : equal_column_classes(r)) {
            BitVector m(r.width());
            for (std::size_t c : cls) m.set(c - 1);
            for (std::size_t c : cls) class_of_[c - 1] = m;
        }
    }
    bool contains(const BitVector& v) const override {
        check_width(v);
        if (!ones_.is_subset_of(v)) return false;
        for (std::size_t i = v.find_first(); i < width(); i = v.find_next(i + 1))
            if (!class_of_[i].is_subset_of(v)) return false;
        for (const auto& s : r_.rows())
            if (v.is_subset_of(s)) return true;
        return false;
    }

private:
    Relation r_;
    BitVector ones_;
    std::vector<BitVector> class_of_;
};

class WindowDecider final : public MembershipDecider {
public:
    WindowDecider(CloneId c, const Relation& r) : MembershipDecider(c, r.width()), ws_(make_window_system(c, r)) {}
    bool contains(const BitVector& v) const override {
        check_width(v);
        std::vector<unsigned char> vals(width());
        for (std::size_t i = 0; i < width(); ++i) vals[i] = v.test(i);
        return ws_.contains(vals.data());
    }

private:
    WindowSystem ws_;
};

// Bit p of a window code belongs to window position k-1-p.
inline bool code_bit(std::uint64_t code, std::size_t k, std::size_t pos) { return (code >> (k - 1 - pos)) & 1U; }

}  // namespace

std::uint64_t window_closure_mask(CloneId c, std::size_t k, std::uint64_t present) {
    if (k == 0 || k > 6) throw InvalidArgument("window width must be in 1..6");
    const std::size_t codes = std::size_t{1} << k;
    if (present == 0) return 0;
    std::uint64_t out = 0;
    // witnesses: pair10[i][j] some pattern has 1 at i and 0 at j; zero[i]
    // some pattern has 0 at i
    bool pair10[6][6] = {};
    bool has0[6] = {};
    for (std::size_t t = 0; t < codes; ++t) {
        if (!((present >> t) & 1U)) continue;
        for (std::size_t i = 0; i < k; ++i) {
            if (!code_bit(t, k, i)) has0[i] = true;
            for (std::size_t j = 0; j < k; ++j)
                if (code_bit(t, k, i) && !code_bit(t, k, j)) pair10[i][j] = true;
        }
    }
    auto dominated = [&](std::uint64_t v) {
        for (std::size_t t = 0; t < codes; ++t)
            if (((present >> t) & 1U) && (t & v) == v) return true;
        return false;
    };
    switch (c.tag) {
        case CloneTag::D2: return present;
        case CloneTag::D1: {
            // closure under x+y+z of a set of patterns is its affine hull
            std::uint64_t hull = present;
            for (bool grew = true; grew;) {
                grew = false;
                for (std::size_t a = 0; a < codes; ++a)
                    for (std::size_t b = 0; b < codes; ++b)
                        for (std::size_t e = 0; e < codes; ++e)
                            if (((hull >> a) & 1U) && ((hull >> b) & 1U) && ((hull >> e) & 1U) && !((hull >> (a ^ b ^ e)) & 1U)) {
                                hull |= std::uint64_t{1} << (a ^ b ^ e);
                                grew = true;
                            }
            }
            // the majority operation adds nothing on a subspace coset
            return hull;
        }
        case CloneTag::S10K:
            for (std::size_t v = 0; v < codes; ++v) {
                bool ok = dominated(v);
                for (std::size_t i = 0; ok && i < k; ++i) {
                    if (!code_bit(v, k, i)) {
                        ok = has0[i];
                        continue;
                    }
                    for (std::size_t j = 0; ok && j < k; ++j)
                        if (!code_bit(v, k, j) && !pair10[i][j]) ok = false;
                }
                if (ok) out |= std::uint64_t{1} << v;
            }
            return out;
        case CloneTag::S12K:
            for (std::size_t v = 0; v < codes; ++v) {
                bool ok = dominated(v);
                for (std::size_t i = 0; ok && i < k; ++i) {
                    if (!code_bit(v, k, i)) {
                        ok = has0[i];
                        continue;
                    }
                    for (std::size_t j = 0; ok && j < k; ++j)
                        if (!code_bit(v, k, j) && !pair10[i][j] && !pair10[j][i]) ok = false;
                }
                if (ok) out |= std::uint64_t{1} << v;
            }
            return out;
        default: throw InvalidArgument("no window closed form for clone " + c.name());
    }
}

WindowSystem make_window_system(CloneId c, const Relation& r) {
    const std::size_t k = window_size(c);
    if (!(c.tag == CloneTag::D2 || c.tag == CloneTag::D1 || c.tag == CloneTag::S10K || c.tag == CloneTag::S12K))
        throw InvalidArgument("make_window_system: clone " + c.name() + " is handled directly");
    if (r.empty()) throw InvalidArgument("make_window_system needs a nonempty relation");
    const std::size_t n = r.width();
    return WindowSystem(n, k, 2, [&](const std::vector<std::size_t>& w) {
        std::uint64_t present = 0;
        for (const auto& s : r.rows()) {
            std::uint64_t code = 0;
            for (std::size_t p : w) code = (code << 1) | static_cast<std::uint64_t>(s.test(p));
            present |= std::uint64_t{1} << code;
        }
        return WindowSystem::Mask{window_closure_mask(c, w.size(), present)};
    });
}

std::unique_ptr<MembershipDecider> make_decider(CloneId c, const Relation& r) {
    if (r.empty()) return std::make_unique<EmptyDecider>(c, r.width());
    switch (c.tag) {
        case CloneTag::I2: return std::make_unique<I2Decider>(r);
        case CloneTag::E2: return std::make_unique<E2Decider>(r);
        case CloneTag::L0: return std::make_unique<AffineDecider>(r, false);
        case CloneTag::L2: return std::make_unique<AffineDecider>(r, true);
        case CloneTag::M2: return std::make_unique<M2Decider>(r);
        case CloneTag::BF:
        case CloneTag::R:
        case CloneTag::R0: return std::make_unique<ClassDecider>(c, r);
        case CloneTag::S10: return std::make_unique<S10Decider>(r);
        case CloneTag::S12: return std::make_unique<S12Decider>(r);
        case CloneTag::S10K:
        case CloneTag::S12K:
            if (c.k < 2) throw InvalidArgument("hierarchy level must be at least 2");
            if (c.k > 6) throw Unsupported("hierarchy levels above 6 are not supported");
            [[fallthrough]];
        case CloneTag::D2:
        case CloneTag::D1: return std::make_unique<WindowDecider>(c, r);
    }
    throw InvalidArgument("unknown clone");
}

bool member(CloneId c, const Relation& r, const BitVector& v) { return make_decider(c, r)->contains(v); }

std::vector<BitVector> atoms_bf(const Relation& r) {
    if (r.empty()) throw InvalidArgument("atoms_bf needs at least one row");
    std::vector<BitVector> atoms(r.width(), BitVector(r.width()));
    for (const auto& cls : equal_column_classes(r)) {
        BitVector m(r.width());
        for (std::size_t c : cls) m.set(c - 1);
        for (std::size_t c : cls) atoms[c - 1] = m;
    }
    return atoms;
}

bool member_i2(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::I2, 0}, r, v); }
bool member_e2(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::E2, 0}, r, v); }
bool member_l0(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::L0, 0}, r, v); }
bool member_l2(const Relation& r, const BitVector& v) {
    if (r.empty()) throw InvalidArgument("member_l2 needs at least one row");
    return member(CloneId{CloneTag::L2, 0}, r, v);
}
bool member_m2(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::M2, 0}, r, v); }
bool member_s10(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::S10, 0}, r, v); }
bool member_s12(const Relation& r, const BitVector& v) { return member(CloneId{CloneTag::S12, 0}, r, v); }
bool member_pairwise(CloneId c, const Relation& r, const BitVector& v) {
    if (c.tag != CloneTag::D2 && c.tag != CloneTag::D1) throw InvalidArgument("member_pairwise takes D2 or D1");
    return member(c, r, v);
}
bool member_kwise(CloneId c, const Relation& r, const BitVector& v) {
    if (c.tag != CloneTag::S10K && c.tag != CloneTag::S12K) throw InvalidArgument("member_kwise takes S10^k or S12^k");
    return member(c, r, v);
}

bool member(const CloneSpec& spec, const Relation& r, const BitVector& v) {
    if (const CloneId* c = std::get_if<CloneId>(&spec)) return member(*c, r, v);
    if (v.width() != r.width()) throw InvalidArgument("vector width does not match the relation");
    if (r.empty()) return false;
    ReducedInstance red = reduce_instance(spec, r);
    auto rv = red.trace.reduce_vector(v);
    if (!rv) return false;
    return member(red.clone, red.relation, *rv);
}

namespace {

std::pair<Relation, BitVector> prefix_projection(const Relation& r, const BitVector& prefix) {
    if (prefix.width() > r.width()) throw InvalidArgument("prefix longer than the relation width");
    IndexSet first = IndexSet::range(r.width(), 1, prefix.width());
    return {project(r, first), prefix};
}

}  // namespace

bool extension(CloneId c, const Relation& r, const BitVector& prefix) {
    if (r.empty()) return false;
    if (prefix.width() == 0) return true;
    auto [p, v] = prefix_projection(r, prefix);
    return member(c, p, v);
}

bool extension(const CloneSpec& spec, const Relation& r, const BitVector& prefix) {
    if (const CloneId* c = std::get_if<CloneId>(&spec)) return extension(*c, r, prefix);
    if (r.empty()) return false;
    if (prefix.width() == 0) return true;
    auto [p, v] = prefix_projection(r, prefix);
    return member(spec, p, v);
}

}  // namespace closure
