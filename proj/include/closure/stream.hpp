#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "closure/bitvector.hpp"
#include "closure/relation.hpp"

namespace closure {

// Counters of a stream. One tick is one scalar step or one machine-word
// operation on a packed vector.
struct StreamStats {
    std::string algorithm;
    std::uint64_t solutions = 0;
    std::uint64_t preprocessing_ticks = 0;
    std::uint64_t max_delay_ticks = 0;
    std::uint64_t last_delay_ticks = 0;
    std::uint64_t total_ticks = 0;
    bool polynomial_delay = true;
    std::vector<std::string> reductions;
};

// Pull-based enumeration. Work done in the constructor of a concrete stream
// counts as preprocessing; every later tick is charged to the gap before the
// next solution (or before exhaustion).
template <class T>
class BasicStream {
public:
    virtual ~BasicStream() = default;
    BasicStream(const BasicStream&) = delete;
    BasicStream& operator=(const BasicStream&) = delete;

    bool next(T& out) {
        if (!ready_) {
            stats_.preprocessing_ticks += since_;
            since_ = 0;
            ready_ = true;
        }
        if (finished_) return false;
        bool got = produce(out);
        stats_.total_ticks += since_;
        stats_.last_delay_ticks = since_;
        if (since_ > stats_.max_delay_ticks) stats_.max_delay_ticks = since_;
        since_ = 0;
        if (got) {
            ++stats_.solutions;
        } else {
            finished_ = true;
        }
        return got;
    }

    const StreamStats& stats() const { return stats_; }
    StreamStats& mutable_stats() { return stats_; }

protected:
    BasicStream(std::string algorithm, bool polynomial_delay = true) {
        stats_.algorithm = std::move(algorithm);
        stats_.polynomial_delay = polynomial_delay;
    }
    virtual bool produce(T& out) = 0;
    void tick(std::uint64_t c = 1) { since_ += c; }

    StreamStats stats_;

private:
    std::uint64_t since_ = 0;
    bool ready_ = false;
    bool finished_ = false;
};

using SolutionStream = BasicStream<BitVector>;
using DomainStream = BasicStream<DomainVector>;
using StreamPtr = std::unique_ptr<SolutionStream>;
using DomainStreamPtr = std::unique_ptr<DomainStream>;

template <class T>
std::vector<T> collect(BasicStream<T>& s, std::size_t limit = std::numeric_limits<std::size_t>::max()) {
    std::vector<T> out;
    T v;
    while (out.size() < limit && s.next(v)) out.push_back(v);
    return out;
}

// Stream over a precomputed list.
template <class T>
class ListStream final : public BasicStream<T> {
public:
    ListStream(std::vector<T> items, std::string algorithm, bool polynomial_delay)
        : BasicStream<T>(std::move(algorithm), polynomial_delay), items_(std::move(items)) {
        this->tick(items_.size());
    }

protected:
    bool produce(T& out) override {
        if (pos_ >= items_.size()) return false;
        this->tick();
        out = items_[pos_++];
        return true;
    }

private:
    std::vector<T> items_;
    std::size_t pos_ = 0;
};

}  // namespace closure
