#pragma once

#include "closure/clones.hpp"
#include "closure/relation.hpp"
#include "closure/stream.hpp"

namespace closure {

// Generic flashlight search driven by the membership decider of each prefix
// projection.
StreamPtr flashlight(CloneId c, const Relation& r);

StreamPtr enum_e2(const Relation& r);
StreamPtr enum_l0(const Relation& r);
StreamPtr enum_l2(const Relation& r);
StreamPtr enum_m2(const Relation& r);
StreamPtr enum_bf(const Relation& r);
StreamPtr enum_r_r0(CloneId c, const Relation& r);
StreamPtr enum_s10(const Relation& r);
StreamPtr enum_s12(const Relation& r);
StreamPtr enum_d2_via_2sat(const Relation& r);
// D1, S10^k and S12^k through window checks.
StreamPtr enum_kwise(CloneId c, const Relation& r);

// Best enumerator for the clone on the instance as given.
StreamPtr enumerate_direct(CloneId c, const Relation& r);
// Reduces the instance (equal columns, and for operation sets also constants,
// duality and negation) and lifts the reduced stream back. Unclassifiable
// operation sets fall back to saturation, flagged as not polynomial delay.
StreamPtr enumerate(CloneId c, const Relation& r);
StreamPtr enumerate(const CloneSpec& spec, const Relation& r);

// Maps every solution of `inner` through trace.lift().
StreamPtr lift_stream(StreamPtr inner, ReductionTrace trace);

}  // namespace closure
