#include "closure/windows.hpp"

#include <algorithm>

#include "closure/errors.hpp"

namespace closure {

namespace {

void subsets_rec(std::size_t limit, std::size_t need, std::size_t start, std::vector<std::size_t>& cur,
                 const std::function<void(const std::vector<std::size_t>&)>& f) {
    if (need == 0) {
        f(cur);
        return;
    }
    for (std::size_t i = start; i + need <= limit; ++i) {
        cur.push_back(i);
        subsets_rec(limit, need - 1, i + 1, cur, f);
        cur.pop_back();
    }
}

}  // namespace

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    if (k == 0) {
        std::vector<std::size_t> none;
        f(none);
        return;
    }
    std::vector<std::size_t> cur;
    for (std::size_t last = k - 1; last < n; ++last) {
        cur.clear();
        subsets_rec(last, k - 1, 0, cur, [&](const std::vector<std::size_t>& head) {
            std::vector<std::size_t> w = head;
            w.push_back(last);
            f(w);
        });
    }
}

WindowSystem::WindowSystem(std::size_t n, std::size_t k, std::size_t d, const Provider& provider)
    : n_(n), k_(std::min(k, n)), d_(d) {
    if (n_ == 0 || k_ == 0) throw InvalidArgument("window system needs n >= 1 and k >= 1");
    codes_ = 1;
    for (std::size_t i = 0; i < k_; ++i) {
        codes_ *= d_;
        if (codes_ > (std::size_t{1} << 24)) throw InvalidArgument("window code space too large");
    }
    words_ = (codes_ + 63) / 64;
    first_by_last_.assign(n_ + 1, 0);
    std::size_t count = 0;
    for_each_subset(n_, k_, [&](const std::vector<std::size_t>& w) {
        for (std::size_t c : w) coords_.push_back(static_cast<std::uint32_t>(c));
        Mask m = provider(w);
        if (m.size() != words_) throw InvalidArgument("window provider returned a mask of the wrong size");
        masks_.insert(masks_.end(), m.begin(), m.end());
        first_by_last_[w.back() + 1] = ++count;
    });
    for (std::size_t l = 1; l <= n_; ++l) first_by_last_[l] = std::max(first_by_last_[l], first_by_last_[l - 1]);

    // Admissible prefixes shorter than k come from the first window.
    prefix_sets_.resize(k_);
    for (std::size_t len = 0; len < k_; ++len) {
        std::size_t div = 1;
        for (std::size_t i = len; i < k_; ++i) div *= d_;
        std::size_t pcodes = codes_ / div;
        prefix_sets_[len].assign((pcodes + 63) / 64, 0);
        for (std::size_t code = 0; code < codes_; ++code)
            if ((masks_[code >> 6] >> (code & 63)) & 1U) mask_set(prefix_sets_[len], code / div);
    }
}

bool WindowSystem::window_ok(std::size_t w, const unsigned char* values) const {
    const std::uint32_t* c = &coords_[w * k_];
    std::size_t code = 0;
    for (std::size_t j = 0; j < k_; ++j) code = code * d_ + values[c[j]];
    return (masks_[w * words_ + (code >> 6)] >> (code & 63)) & 1U;
}

bool WindowSystem::contains(const unsigned char* values) const {
    std::size_t total = window_count();
    for (std::size_t w = 0; w < total; ++w)
        if (!window_ok(w, values)) return false;
    return true;
}

bool WindowSystem::extend_ok(std::size_t l, const unsigned char* values, std::uint64_t& ticks) const {
    if (l + 1 < k_) {
        std::size_t code = 0;
        for (std::size_t j = 0; j <= l; ++j) code = code * d_ + values[j];
        ticks += l + 1;
        return mask_test(prefix_sets_[l + 1], code);
    }
    for (std::size_t w = first_by_last_[l]; w < first_by_last_[l + 1]; ++w) {
        ticks += k_;
        if (!window_ok(w, values)) return false;
    }
    return true;
}

}  // namespace closure
