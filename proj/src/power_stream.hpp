#pragma once

#include <cstdint>
#include <vector>

#include "slam/structure.hpp"

namespace slam::detail {

// Streams every choice of m tuples (columns) from r and hands the r.arity() row codes
// of the resulting m x arity matrix to emit; emit returns false to stop.
class row_stream {
public:
    row_stream(const relation& r, int domain_size, int m) : r_(r), m_(m), weight_(m) {
        std::uint64_t w = 1;
        for (int i = m - 1; i >= 0; --i) {
            weight_[i] = w;
            w *= static_cast<std::uint64_t>(domain_size);
        }
        codes_.assign(static_cast<std::size_t>(m + 1) * r.arity(), 0);
    }

    std::uint64_t prefix_count(int depth) const {
        std::uint64_t c = 1;
        for (int i = 0; i < depth; ++i) c *= r_.size();
        return c;
    }

    // Runs the stream restricted to the given prefix of the first `depth` column choices.
    template <class Emit>
    bool run(int depth, std::uint64_t prefix, Emit&& emit) {
        if (r_.empty()) return true;
        const int a = r_.arity();
        std::vector<std::size_t> idx(depth);
        for (int i = depth - 1; i >= 0; --i) {
            idx[i] = prefix % r_.size();
            prefix /= r_.size();
        }
        for (int j = 0; j < a; ++j) codes_[depth * a + j] = 0;
        for (int i = 0; i < depth; ++i) {
            auto t = r_[idx[i]];
            for (int j = 0; j < a; ++j) codes_[depth * a + j] += t[j] * weight_[i];
        }
        return descend(depth, emit);
    }

    template <class Emit>
    bool run_all(Emit&& emit) {
        return run(0, 0, emit);
    }

private:
    template <class Emit>
    bool descend(int level, Emit& emit) {
        const int a = r_.arity();
        const std::uint64_t* cur = &codes_[level * a];
        if (level == m_) return emit(cur);
        std::uint64_t* next = &codes_[(level + 1) * a];
        for (auto t : r_) {
            for (int j = 0; j < a; ++j) next[j] = cur[j] + t[j] * weight_[level];
            if (!descend(level + 1, emit)) return false;
        }
        return true;
    }

    const relation& r_;
    int m_;
    std::vector<std::uint64_t> weight_;
    std::vector<std::uint64_t> codes_;
};

} // namespace slam::detail
