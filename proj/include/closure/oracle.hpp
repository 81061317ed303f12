#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "closure/clones.hpp"
#include "closure/relation.hpp"

namespace closure {

struct SaturationBudget {
    std::size_t max_elements = 1u << 22;
    std::size_t max_rounds = 1u << 20;
};

// Reads CLOSURE_BUDGET (max element count) if set.
SaturationBudget default_budget();

// Naive fixpoint of r under ops and the optional single-coordinate closures.
// Output keeps insertion order: the rows of r first.
Relation saturate(const Relation& r, const std::vector<OperationTable>& ops, const UDSpec* ud = nullptr,
                  SaturationBudget budget = default_budget());

Relation saturate_clone(const Relation& r, CloneId c, const UDSpec* ud = nullptr, SaturationBudget budget = default_budget());

class DomainRelation {
public:
    DomainRelation() = default;
    DomainRelation(std::size_t width, std::size_t d, const std::vector<DomainVector>& rows);
    static DomainRelation from_strings(std::size_t d, const std::vector<std::string>& rows);
    static DomainRelation from_boolean(const Relation& r);

    std::size_t width() const { return width_; }
    std::size_t domain_size() const { return d_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const std::vector<DomainVector>& rows() const { return rows_; }
    bool contains(const DomainVector& v) const;
    DomainRelation project(const std::vector<std::size_t>& coords0) const;
    std::vector<std::string> to_strings() const;

private:
    std::size_t width_ = 0;
    std::size_t d_ = 2;
    std::vector<DomainVector> rows_;
    std::unordered_set<std::string> index_;
};

std::string to_string(const DomainVector& v);
DomainVector domain_vector_from_string(const std::string& s, std::size_t d);

DomainRelation saturate_domain(const DomainRelation& r, const std::vector<OperationTable>& ops,
                               SaturationBudget budget = default_budget());

}  // namespace closure
