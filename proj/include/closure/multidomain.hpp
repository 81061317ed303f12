#pragma once

#include <cstddef>
#include <vector>

#include "closure/clones.hpp"
#include "closure/oracle.hpp"
#include "closure/relation.hpp"
#include "closure/stream.hpp"
#include "closure/windows.hpp"

namespace closure {

// f(x,..,x,y,x,..,x) = x for every position of y; false for arity < 3.
bool detect_near_unanimity(const OperationTable& op);
// Binary and f(f(x,y),z) = f(x,f(y,z)) on all d^3 triples.
bool is_associative(const OperationTable& f);

// Windows of size k (one less than the smallest near-unanimity arity among
// ops), each holding the closure of the projected rows. Throws Unsupported
// without a near-unanimity operation.
WindowSystem nu_window_system(const std::vector<OperationTable>& ops, const DomainRelation& r);
bool member_nu(const std::vector<OperationTable>& ops, const DomainRelation& r, const DomainVector& v);
// Flashlight with d-way branching over coordinates.
DomainStreamPtr enum_nu(const std::vector<OperationTable>& ops, const DomainRelation& r);

// Depth-first traversal v -> f(v, s) from the rows; keeps every solution in a
// visited set, so memory grows with the output (flagged).
DomainStreamPtr enum_assoc(const OperationTable& f, const DomainRelation& r);

struct Exact3CoverInstance {
    DomainRelation relation;  // characteristic vectors over {0,1,2}
    OperationTable op;        // min(x+y, 2)
    DomainVector target;      // all ones
};
// The target is in the closure iff some subfamily partitions 1..n.
Exact3CoverInstance encode_exact3cover(std::size_t n, const std::vector<IndexSet>& triples);

}  // namespace closure
