#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "closure/relation.hpp"

namespace closure {

// Finite operation D^t -> D. Entry index is the input tuple read as a base-d
// number with the first argument most significant.
class OperationTable {
public:
    OperationTable() = default;
    OperationTable(std::size_t arity, std::size_t domain_size, std::vector<std::uint8_t> table, std::string name = {});

    std::size_t arity() const { return arity_; }
    std::size_t domain_size() const { return d_; }
    const std::vector<std::uint8_t>& table() const { return table_; }
    const std::string& name() const { return name_; }
    bool is_symmetric() const { return symmetric_; }

    std::uint8_t eval(const std::vector<std::uint8_t>& args) const;
    std::uint8_t at(std::size_t index) const { return table_[index]; }
    // Coordinatewise application to boolean vectors of equal width.
    BitVector apply(const std::vector<const BitVector*>& args) const;

    bool operator==(const OperationTable& o) const { return arity_ == o.arity_ && d_ == o.d_ && table_ == o.table_; }

private:
    std::size_t arity_ = 0;
    std::size_t d_ = 2;
    std::vector<std::uint8_t> table_;
    std::string name_;
    bool symmetric_ = false;
};

OperationTable dualize(const OperationTable& op);
OperationTable read_operation(std::istream& in);
std::string describe(const OperationTable& op);

namespace ops {
OperationTable and2();
OperationTable or2();
OperationTable not1();
OperationTable xor2();            // x+y
OperationTable xor3();            // x+y+z
OperationTable maj();
OperationTable threshold(std::size_t k);  // Th_k^{k+1}, arity k+1
OperationTable ite();             // x ? y : z
OperationTable s10();             // x and (y or z)
OperationTable s12();             // x and (y implies z)
OperationTable constant(std::uint8_t value, std::size_t d = 2);
OperationTable min_sum(std::size_t d = 3);  // min(x+y, d-1)
OperationTable from_function(std::size_t arity, std::size_t d, const std::function<std::uint8_t(const std::vector<std::uint8_t>&)>& f,
                             std::string name = {});
}  // namespace ops

enum class CloneTag { I2, E2, L0, L2, M2, BF, R, R0, S10, S12, S10K, S12K, D2, D1 };

struct CloneId {
    CloneTag tag = CloneTag::I2;
    std::size_t k = 0;  // only for S10K/S12K, k >= 2

    static CloneId parse(const std::string& name);
    static CloneId s10k(std::size_t k) { return {CloneTag::S10K, k}; }
    static CloneId s12k(std::size_t k) { return {CloneTag::S12K, k}; }
    std::string name() const;
    bool operator==(const CloneId& o) const { return tag == o.tag && k == o.k; }
    bool operator!=(const CloneId& o) const { return !(*this == o); }
};

// Generators of each registry clone.
std::vector<OperationTable> clone_base(CloneId c);
// Every clone of the reduced lattice with hierarchy levels 2..k_max.
std::vector<CloneId> registry(std::size_t k_max = 5);
// Width of the windows that determine membership, or 0 when the clone has
// no near-unanimity operation.
std::size_t window_size(CloneId c);
bool is_self_dual(CloneId c);
bool contains_constant(CloneId c, bool value);

struct ClassifyConfig {
    std::size_t max_arity = 4;
    std::size_t k_max = 5;
};

// How a set of operations maps onto a registry clone.
struct Classification {
    CloneId clone;
    bool dualized = false;
    bool add_zero = false;  // constants are stated before dualization
    bool add_one = false;
    bool fold_negation = false;
};

std::optional<Classification> classify_detailed(const std::vector<OperationTable>& ops, const ClassifyConfig& cfg = {});
std::optional<CloneId> classify(const std::vector<OperationTable>& ops, const ClassifyConfig& cfg = {});
// Truth-table test: is f a member of the clone generated by the base of c?
bool clone_contains(CloneId c, const OperationTable& f);

enum class StepKind { AddConstant0, AddConstant1, Dualize, FoldNegation, MergeEqualColumns, DropFreeColumn };

struct ReductionStep {
    StepKind kind;
    // MergeEqualColumns: classes of 1-based original coordinates, in the
    // order of the reduced coordinates.
    std::vector<std::vector<std::size_t>> partition;
    // DropFreeColumn: 1-based coordinate of the width before the drop.
    std::size_t column = 0;
};

class ReductionTrace {
public:
    explicit ReductionTrace(std::size_t original_width = 0) : original_width_(original_width) {}

    void push(ReductionStep s) { steps_.push_back(std::move(s)); }
    const std::vector<ReductionStep>& steps() const { return steps_; }
    std::size_t original_width() const { return original_width_; }
    bool empty() const { return steps_.empty(); }
    // Number of original vectors produced from one reduced vector.
    std::size_t fanout() const;
    // Maps a reduced solution back to all original solutions it stands for.
    void lift(const BitVector& reduced, const std::function<void(const BitVector&)>& emit) const;
    std::vector<BitVector> lift(const BitVector& reduced) const;
    // Maps an original vector forward; nullopt when it cannot be a solution
    // because it splits an equal-column class.
    std::optional<BitVector> reduce_vector(const BitVector& original) const;
    std::string describe() const;

private:
    std::size_t original_width_;
    std::vector<ReductionStep> steps_;
};

std::string step_name(StepKind k);

struct ReducedInstance {
    CloneId clone;
    Relation relation;
    ReductionTrace trace;
};

using CloneSpec = std::variant<CloneId, std::vector<OperationTable>>;

// Applies constant folding, dualization, negation folding and equal-column
// merging. Throws Unsupported when the operations cannot be classified.
ReducedInstance reduce_instance(const CloneSpec& spec, const Relation& r, const ClassifyConfig& cfg = {});
ReducedInstance merge_equal_columns(CloneId c, const Relation& r, ReductionTrace trace);

}  // namespace closure
