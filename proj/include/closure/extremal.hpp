#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "closure/clones.hpp"
#include "closure/formulas.hpp"
#include "closure/oracle.hpp"
#include "closure/relation.hpp"
#include "closure/stream.hpp"

namespace closure {

enum class Side { Max, Min };

// Hyperedges are IndexSets over 1..n.
struct Hypergraph {
    std::size_t n = 0;
    std::vector<IndexSet> edges;

    // Largest edge size.
    std::size_t dimension() const;
    // Throws InvalidArgument on empty, out-of-range or repeated edges.
    void validate() const;
};

// Vertices are 0-based; vertex i is coordinate i of the produced vectors.
struct Graph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    void validate() const;
};

// Inclusion-maximal (or minimal) members of `items`, with 0 and 1 removed
// first. Duplicates collapse.
std::vector<BitVector> extremal_filter(std::vector<BitVector> items, Side side);

// Closed forms. Max side: E2, M2, S10, S12. Min side: E2, M2, R, R0, S10,
// S12, S10^k, S12^k. Other combinations throw InvalidArgument.
std::vector<BitVector> max_min_trivial(CloneId c, const Relation& r, Side side);

// Maximal models of the pairwise 2CNF of a clone containing the majority
// operation (D2, D1, M2, BF, R, R0); the min side runs on the formula with
// every literal negated.
StreamPtr max_models_maj(CloneId c, const Relation& r, Side side);
// Maximal models, except 0 and 1, of an arbitrary 2CNF.
StreamPtr max_models_2cnf(std::size_t n, const std::vector<Clause2>& clauses);

// Every maximal independent set once, by the Tsukiyama-style reverse
// search over the prefixes G[0..j].
StreamPtr graph_mis_enum(const Graph& g);
// Every maximal independent set once, by backtracking with a maximality
// certificate. Not polynomial delay.
StreamPtr hypergraph_mis_enum(const Hypergraph& h);

// Edges: every I, |I| <= k, on which no row is all ones.
Hypergraph closure_to_hypergraph(const Relation& r, std::size_t k);
// For a k-regular h (k >= 2): the k-subsets that are not edges, every
// (k-1)-subset, and the unit vectors. Its S10^k and S12^k closures are the
// independent sets of h.
Relation hypergraph_to_closure(const Hypergraph& h);

// Minimal nonzero supports of the GF(2) span (the binary matroid circuits),
// by span enumeration.
std::vector<BitVector> min_l0(const Relation& r, SaturationBudget budget = default_budget());
// Parity-check rows whose kernel is span(r).
std::vector<BitVector> to_binary_matroid(const Relation& r);
std::vector<BitVector> min_l2(const Relation& r, SaturationBudget budget = default_budget());
std::vector<BitVector> max_l0(const Relation& r, SaturationBudget budget = default_budget());
std::vector<BitVector> max_l2(const Relation& r, SaturationBudget budget = default_budget());

// Filter of the saturated closure; exponential, used as fallback and oracle.
std::vector<BitVector> extremal_bruteforce(CloneId c, const Relation& r, Side side,
                                           SaturationBudget budget = default_budget());

// Best routine for the clone and side. Equal columns are merged first.
StreamPtr extremal(CloneId c, const Relation& r, Side side);

Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);

}  // namespace closure
