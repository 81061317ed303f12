#pragma once

#include <vector>

#include "closure/clones.hpp"
#include "closure/formulas.hpp"
#include "closure/relation.hpp"
#include "closure/stream.hpp"
#include "closure/windows.hpp"

namespace closure {

// Cl_{C + up + down}(r), where up_i sets coordinate i to 1 and down_i sets it
// to 0. Supported: I2 (no operation), E2, L0, L2, S10, S12 and every clone
// containing a near-unanimity operation (D2, D1, M2, BF, R, R0, S10^k,
// S12^k). An empty spec delegates to enumerate().
StreamPtr enum_ud(CloneId c, const Relation& r, const UDSpec& ud);
bool member_ud(CloneId c, const Relation& r, const UDSpec& ud, const BitVector& v);

// One term per row: x_i where the row has 1 and i is not down, ~x_i where it
// has 0 and i is not up. Models are Cl_{up+down}(r).
std::vector<DNFClause> ud_dnf(const Relation& r, const UDSpec& ud);

// Plain instances with the same closure.
// L0/L2: r plus a unit direction for every coordinate the maps can toggle.
Relation ud_affine_instance(CloneId c, const Relation& r, const UDSpec& ud);
// S10: the raised rows, the smallest element containing each coordinate,
// and the smallest element overall.
Relation ud_s10_instance(const Relation& r, const UDSpec& ud);
// S12: coordinates that are up and not constant 1 are free and dropped;
// every down coordinate gets one lowered row.
ReducedInstance ud_s12_instance(const Relation& r, const UDSpec& ud);

// Windows of the clone's near-unanimity width, each holding the closure of
// the projected rows under the clone and the window's up/down maps.
WindowSystem ud_window_system(CloneId c, const Relation& r, const UDSpec& ud);

}  // namespace closure
