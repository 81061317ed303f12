#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace closure {

// Membership via all k-coordinate projections (Baker-Pixley). Each window
// stores the set of admissible value codes as a bitset over d^k codes; the
// code reads the window values as a base-d number, first coordinate most
// significant.
class WindowSystem {
public:
    using Mask = std::vector<std::uint64_t>;
    using Provider = std::function<Mask(const std::vector<std::size_t>& coords0)>;

    WindowSystem() = default;
    // k is clamped to n; the provider is called once per window.
    WindowSystem(std::size_t n, std::size_t k, std::size_t d, const Provider& provider);

    std::size_t width() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t domain_size() const { return d_; }
    std::size_t window_count() const { return masks_.size() / words_; }
    std::size_t code_count() const { return codes_; }

    bool contains(const unsigned char* values) const;
    // Tests the prefix values[0..l] given that values[0..l-1] already passed.
    // `ticks` accumulates the work done.
    bool extend_ok(std::size_t l, const unsigned char* values, std::uint64_t& ticks) const;

    static bool mask_test(const Mask& m, std::size_t code) { return (m[code >> 6] >> (code & 63)) & 1U; }
    static void mask_set(Mask& m, std::size_t code) { m[code >> 6] |= std::uint64_t{1} << (code & 63); }
    Mask empty_mask() const { return Mask(words_, 0); }

private:
    bool window_ok(std::size_t w, const unsigned char* values) const;

    std::size_t n_ = 0, k_ = 0, d_ = 2, codes_ = 1, words_ = 1;
    std::vector<std::uint32_t> coords_;        // k entries per window
    std::vector<std::uint64_t> masks_;         // words_ entries per window
    std::vector<std::size_t> first_by_last_;   // windows are sorted by last coordinate
    std::vector<Mask> prefix_sets_;            // admissible prefixes of length < k
};

// Calls f on every k-subset of {0..n-1} in colex order (sorted by last
// element, then lexicographically).
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f);

}  // namespace closure
