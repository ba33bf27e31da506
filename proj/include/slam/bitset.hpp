#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace slam {

// Dynamic bitset over a small universe 0..n-1.
class bitset {
public:
    bitset() = default;
    explicit bitset(int universe, bool full = false)
        : universe_(universe), words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0) {
        if (full) clear_tail();
    }

    int universe() const { return universe_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    // Lowest set element, or -1.
    int first() const { return next(0); }
    int next(int from) const {
        if (from >= universe_) return -1;
        std::size_t wi = static_cast<std::size_t>(from) >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return static_cast<int>(wi * 64 + std::countr_zero(w));
            if (++wi >= words_.size()) return -1;
            w = words_[wi];
        }
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        for (int i = first(); i >= 0; i = next(i + 1)) out.push_back(i);
        return out;
    }

    bool is_subset_of(const bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bitset& operator&=(const bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    bitset& operator|=(const bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool operator==(const bitset&) const = default;
    auto operator<=>(const bitset&) const = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    void clear_tail() {
        if (universe_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }

    int universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace slam
