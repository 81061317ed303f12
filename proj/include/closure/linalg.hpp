#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "closure/bitvector.hpp"

namespace closure {

// Row basis over GF(2) kept in reduced echelon form: every pivot column is
// set in exactly one basis row.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t width = 0) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<BitVector>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // Returns true when v was independent of the current basis.
    bool insert(BitVector v);
    // v minus its projection on the span; zero iff v is in the span.
    BitVector reduce(BitVector v) const;
    bool in_span(const BitVector& v) const { return reduce(v).none(); }
    // Basis of { y : <b, y> = 0 for every basis row b }.
    std::vector<BitVector> orthogonal_complement() const;

private:
    std::size_t width_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace closure
