#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace tracekit {

// Fixed-universe bitset over row ids. All derived pattern semantics
// (consistency, entailment, satisfying-row sets) reduce to word-parallel
// operations on these.
class RowSet {
public:
    RowSet() = default;
    explicit RowSet(int universe, bool fill = false)
        : bits_(universe), words_((universe + 63) / 64, fill ? ~0ull : 0ull) {
        trim();
    }

    static RowSet all(int universe) { return RowSet(universe, true); }
    static RowSet none(int universe) { return RowSet(universe, false); }

    int universe() const { return bits_; }

    void set(int i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    int count() const {
        int n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    // Lowest set bit, or -1 when empty.
    int first() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
        return -1;
    }

    RowSet& operator&=(const RowSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    RowSet& operator|=(const RowSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    // this & ~o
    RowSet& and_not(const RowSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend RowSet operator&(RowSet a, const RowSet& b) { return a &= b; }

    RowSet complement() const {
        RowSet r(*this);
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    bool subset_of(const RowSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const RowSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool operator==(const RowSet& o) const = default;

    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (auto w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    void trim() {
        if (bits_ & 63) words_.back() &= (1ull << (bits_ & 63)) - 1;
    }

    int bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace tracekit
