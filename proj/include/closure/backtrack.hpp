#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "closure/stream.hpp"

namespace closure {

// Depth-first search over value assignments to coordinates 0..n-1, values
// tried in increasing order. Subclasses accept or reject each new value in
// push() and undo accepted values in pop(); every accepted full assignment
// is a solution. When push() only accepts extensible prefixes this is the
// flashlight search and the delay is at most 2n*d pushes.
template <class T>
class Backtrack : public BasicStream<T> {
protected:
    Backtrack(std::string algorithm, std::size_t n, std::size_t d, bool polynomial_delay = true)
        : BasicStream<T>(std::move(algorithm), polynomial_delay), n_(n), d_(d), values_(n, 0), next_(n + 1, 0) {}

    // Called once before the search; false means there are no solutions.
    virtual bool root() { return true; }
    // values_[l] was just set; values_[0..l-1] are accepted.
    virtual bool push(std::size_t l) = 0;
    virtual void pop(std::size_t /*l*/) {}
    virtual void output(T& out) = 0;

    std::size_t n_, d_;
    std::vector<unsigned char> values_;

private:
    bool produce(T& out) final {
        if (!started_) {
            started_ = true;
            if (!root()) return false;
            if (n_ == 0) {
                output(out);
                return true;
            }
            l_ = 0;
            next_[0] = 0;
        } else {
            if (n_ == 0) return false;
            l_ = n_ - 1;
            pop(l_);
        }
        while (true) {
            if (next_[l_] == d_) {
                if (l_ == 0) return false;
                --l_;
                pop(l_);
                continue;
            }
            values_[l_] = static_cast<unsigned char>(next_[l_]++);
            this->tick();
            if (!push(l_)) continue;
            if (l_ + 1 == n_) {
                this->tick(n_);
                output(out);
                return true;
            }
            ++l_;
            next_[l_] = 0;
        }
    }

    std::vector<std::size_t> next_;
    std::size_t l_ = 0;
    bool started_ = false;
};

// Boolean specialization producing BitVectors.
class BoolBacktrack : public Backtrack<BitVector> {
protected:
    BoolBacktrack(std::string algorithm, std::size_t n, bool polynomial_delay = true)
        : Backtrack<BitVector>(std::move(algorithm), n, 2, polynomial_delay) {}
    void output(BitVector& out) override {
        out = BitVector(n_);
        for (std::size_t i = 0; i < n_; ++i)
            if (values_[i]) out.set(i);
    }
};

}  // namespace closure
