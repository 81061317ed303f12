#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "closure/bitvector.hpp"
#include "closure/errors.hpp"

namespace closure {

// Sorted subset of 1..width.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::size_t width, std::vector<std::size_t> members);
    static IndexSet full(std::size_t width);
    static IndexSet range(std::size_t width, std::size_t first, std::size_t last);

    std::size_t width() const { return width_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<std::size_t>& members() const { return members_; }
    bool contains(std::size_t i) const;
    // Composition: the members of this set selected by the 1-based
    // positions in `inner` (inner.width() == size()).
    IndexSet compose(const IndexSet& inner) const;

    bool operator==(const IndexSet& o) const = default;

private:
    std::size_t width_ = 0;
    std::vector<std::size_t> members_;
};

// Ordered duplicate-free set of equal-width rows, with a transposed copy
// kept for column scans.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::size_t width) : width_(width) {}
    Relation(std::size_t width, const std::vector<BitVector>& rows);
    static Relation from_strings(const std::vector<std::string>& rows);

    std::size_t width() const { return width_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const std::vector<BitVector>& rows() const { return rows_; }
    const BitVector& row(std::size_t i) const { return rows_[i]; }
    // Column c (0-based) as a vector of width size().
    const BitVector& column(std::size_t c) const { return columns_[c]; }
    bool contains(const BitVector& v) const;
    std::optional<std::size_t> index_of(const BitVector& v) const;

    std::vector<std::string> to_strings() const;
    bool operator==(const Relation& o) const { return width_ == o.width_ && rows_ == o.rows_; }

private:
    std::size_t width_ = 0;
    std::vector<BitVector> rows_;
    std::vector<BitVector> columns_;
    std::unordered_map<BitVector, std::size_t, BitVectorHash> index_;
};

// Vector over {0..d-1}.
using DomainVector = std::vector<unsigned char>;

// Upward (up) and downward (down) single-coordinate closures.
struct UDSpec {
    IndexSet up;
    IndexSet down;
    bool empty() const { return up.empty() && down.empty(); }
    void validate(std::size_t width) const;
};

Relation project(const Relation& r, const IndexSet& I);
BitVector project(const BitVector& v, const IndexSet& I);
Relation complement_rows(const Relation& r);
// Classes of equal columns, each a sorted list of 1-based indices, ordered
// by smallest member.
std::vector<std::vector<std::size_t>> equal_column_classes(const Relation& r);

// Parsed "n m d" relation file. Values are digits below d.
struct RawRelation {
    std::size_t n = 0;
    std::size_t d = 2;
    std::vector<std::vector<unsigned char>> rows;
};

// Next line that is neither blank nor a '#' comment, trimmed; lineno counts
// every line read.
bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno);

RawRelation read_raw_relation(std::istream& in);
Relation read_relation(std::istream& in);
Relation read_relation_file(const std::string& path);
void write_relation(std::ostream& out, const Relation& r);

BitVector intersection_of_all(const Relation& r);
BitVector union_of_all(const Relation& r);

}  // namespace closure
