#include "closure/linalg.hpp"

namespace closure {

bool Gf2Basis::insert(BitVector v) {
    v = reduce(std::move(v));
    std::size_t p = v.find_first();
    if (p >= width_) return false;
    for (auto& row : rows_)
        if (row.test(p)) row ^= v;
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

BitVector Gf2Basis::reduce(BitVector v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (v.test(pivots_[i])) v ^= rows_[i];
    return v;
}

std::vector<BitVector> Gf2Basis::orthogonal_complement() const {
    std::vector<bool> is_pivot(width_, false);
    for (std::size_t p : pivots_) is_pivot[p] = true;
    std::vector<BitVector> out;
    for (std::size_t f = 0; f < width_; ++f) {
        if (is_pivot[f]) continue;
        BitVector y = BitVector::unit(width_, f);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].test(f)) y.set(pivots_[i]);
        out.push_back(std::move(y));
    }
    return out;
}

}  // namespace closure
