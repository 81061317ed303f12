#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "closure/clones.hpp"
#include "closure/relation.hpp"
#include "closure/stream.hpp"

namespace closure {

// Variable indices are 0-based; text output uses x1..xn.
struct Literal {
    std::size_t var = 0;
    bool positive = true;
    bool operator==(const Literal& o) const = default;
    auto operator<=>(const Literal& o) const = default;
};

// Disjunction of at most two literals; no literals means false.
struct Clause2 {
    std::vector<Literal> lits;
    bool operator==(const Clause2& o) const = default;
};

// Conjunction of literals.
using DNFClause = std::vector<Literal>;

std::string to_string(const Clause2& c);
std::string to_string(const DNFClause& t, bool as_term);

// One clause per missing value pair of each coordinate pair (and a unit per
// missing value of a single column). Models equal Cl_D2(r).
std::vector<Clause2> build_phi_d2(const Relation& r);
// Same construction from the per-pair closures of any clone containing the
// majority operation (D2, D1, M2, BF, R, R0).
std::vector<Clause2> build_phi_pairwise(CloneId c, const Relation& r);

bool satisfies(const std::vector<Clause2>& clauses, const BitVector& v);
bool satisfies(const std::vector<DNFClause>& terms, const BitVector& v);

// Reachability in the implication graph of a 2CNF. Node 2x+b stands for
// "variable x takes value b".
class ImplicationClosure {
public:
    ImplicationClosure(std::size_t n, const std::vector<Clause2>& clauses);
    std::size_t variables() const { return n_; }
    bool satisfiable() const { return sat_; }
    // Value the variable takes in every model, if any.
    std::optional<bool> forced(std::size_t x) const;
    // Does every model with x=a have y=b?
    bool implies(std::size_t x, bool a, std::size_t y, bool b) const;

private:
    std::size_t n_;
    bool sat_ = true;
    std::vector<BitVector> reach_;  // over the 2n nodes
};

// Every model of the 2CNF, by flashlight search with an SCC test per node.
StreamPtr enum_2cnf_models(std::size_t n, const std::vector<Clause2>& clauses);
// Every assignment satisfying some term.
StreamPtr enum_dnf_models(const std::vector<DNFClause>& terms, std::size_t n);

// Rows chi(C_i) + e_j for every term C_i and coordinate j: the join-closure
// of these rows is the model set of the monotone DNF.
Relation mondnf_to_e2_instance(const std::vector<DNFClause>& terms, std::size_t n);

// Equivalent-for-maxima formula where every variable has one polarity: the
// forced literals as units plus every implied clause (~x | ~y) between
// unforced variables. An unsatisfiable input yields the single empty clause.
std::vector<Clause2> eliminate_positive_by_resolution(std::size_t n, const std::vector<Clause2>& clauses);

// DIMACS-like text: "p cnf n c" or "p dnf n t", then one line of nonzero
// signed variable numbers per clause or term, each ended by 0.
struct CnfText {
    std::size_t n = 0;
    std::vector<std::vector<Literal>> items;
    bool dnf = false;
};
CnfText read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const CnfText& f);

}  // namespace closure
