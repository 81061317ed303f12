#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "closure/clones.hpp"
#include "closure/relation.hpp"
#include "closure/windows.hpp"

namespace closure {

// Decides v in Cl_C(S) for a fixed relation S.
class MembershipDecider {
public:
    virtual ~MembershipDecider() = default;
    virtual bool contains(const BitVector& v) const = 0;
    CloneId clone() const { return clone_; }
    std::size_t width() const { return width_; }

protected:
    MembershipDecider(CloneId c, std::size_t width) : clone_(c), width_(width) {}
    void check_width(const BitVector& v) const;

private:
    CloneId clone_;
    std::size_t width_;
};

std::unique_ptr<MembershipDecider> make_decider(CloneId c, const Relation& r);

bool member(CloneId c, const Relation& r, const BitVector& v);
// Operations are classified and the instance reduced first.
bool member(const CloneSpec& spec, const Relation& r, const BitVector& v);
// Is the prefix the start of some element of Cl_C(S)?
bool extension(CloneId c, const Relation& r, const BitVector& prefix);
bool extension(const CloneSpec& spec, const Relation& r, const BitVector& prefix);

// x^i = meet of the rows having a 1 at i, or nullopt for an all-zero column.
std::vector<std::optional<BitVector>> column_atoms(const Relation& r);
inline std::vector<std::optional<BitVector>> atoms_m2(const Relation& r) { return column_atoms(r); }
// x^i = meet of {v : v_i = 1} and {~v : v_i = 0}: the equal-column class of i.
std::vector<BitVector> atoms_bf(const Relation& r);

// Per-clone entry points; all throw InvalidArgument on a width mismatch.
bool member_i2(const Relation& r, const BitVector& v);
bool member_e2(const Relation& r, const BitVector& v);
bool member_l0(const Relation& r, const BitVector& v);
bool member_l2(const Relation& r, const BitVector& v);
bool member_m2(const Relation& r, const BitVector& v);
bool member_s10(const Relation& r, const BitVector& v);
bool member_s12(const Relation& r, const BitVector& v);
bool member_pairwise(CloneId c, const Relation& r, const BitVector& v);  // D2, D1
bool member_kwise(CloneId c, const Relation& r, const BitVector& v);     // S10^k, S12^k

// Admissible patterns of Cl_C restricted to a window, given the set of
// patterns the rows show there (bit t of `present` for code t). Only for
// clones with window_size(c) > 0 other than M2, BF, R, R0, and for
// width <= window_size(c).
std::uint64_t window_closure_mask(CloneId c, std::size_t width, std::uint64_t present);
// Window system of the closure; C must be D2, D1, S10^k or S12^k.
WindowSystem make_window_system(CloneId c, const Relation& r);

}  // namespace closure
