#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace closure {

// Fixed-width packed boolean vector. Coordinates are 0-based in this API;
// text and IndexSet use the 1-based convention.
class BitVector {
public:
    using word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t width) : width_(width), words_(word_count(width), 0) {}

    static std::size_t word_count(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }
    static BitVector ones(std::size_t width);
    static BitVector unit(std::size_t width, std::size_t i);
    static BitVector from_string(std::string_view s);

    std::size_t width() const { return width_; }
    std::size_t num_words() const { return words_.size(); }
    const word* data() const { return words_.data(); }
    word* data() { return words_.data(); }
    word word_at(std::size_t w) const { return words_[w]; }
    word& word_at(std::size_t w) { return words_[w]; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= word{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(word{1} << (i & 63)); }
    void assign(std::size_t i, bool b) { b ? set(i) : reset(i); }
    void flip(std::size_t i) { words_[i >> 6] ^= word{1} << (i & 63); }

    std::size_t count() const;
    bool none() const;
    bool all() const;
    // Lowest set coordinate at or after `from`, or width() if none.
    std::size_t find_next(std::size_t from) const;
    std::size_t find_first() const { return find_next(0); }

    bool is_subset_of(const BitVector& o) const;
    bool intersects(const BitVector& o) const;

    BitVector& operator&=(const BitVector& o);
    BitVector& operator|=(const BitVector& o);
    BitVector& operator^=(const BitVector& o);
    BitVector& and_not(const BitVector& o);
    BitVector operator~() const;
    void clear();
    void fill();

    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    bool operator==(const BitVector& o) const { return width_ == o.width_ && words_ == o.words_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }
    // Lexicographic with coordinate 0 most significant: the order of the
    // digit strings.
    bool operator<(const BitVector& o) const;

    std::string to_string() const;
    std::size_t hash() const;
    std::vector<std::size_t> ones_indices() const;

private:
    void trim();
    std::size_t width_ = 0;
    std::vector<word> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

}  // namespace closure

template <>
struct std::hash<closure::BitVector> {
    std::size_t operator()(const closure::BitVector& v) const { return v.hash(); }
};
