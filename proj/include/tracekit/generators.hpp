#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/trace_system.hpp"

namespace tracekit {

// Deterministic generators. Identical parameters yield bit-identical
// systems across runs and platforms.

// SplitMix64. The sole PRNG used anywhere in the library: state advances by
// the golden-gamma constant and each output is the finalized mix of the new
// state. Seeding rule: state starts at the user seed verbatim.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

// Universe 0..points-1; one column per closed interval [lo, hi], by
// membership.
inline TraceSystem gen_intervals(int points, const std::vector<std::pair<int, int>>& which) {
    if (points < 2) throw DomainError("interval universe needs at least 2 points");
    if (which.empty()) throw DomainError("empty interval list");
    for (auto [lo, hi] : which)
        if (lo < 0 || hi >= points || lo > hi)
            throw DomainError("bad interval [" + std::to_string(lo) + "," + std::to_string(hi) +
                              "]");
    TraceSystem sys(points, static_cast<int>(which.size()), [&](int r, int c) {
        return which[c].first <= r && r <= which[c].second;
    });
    std::vector<std::string> labels;
    for (auto [lo, hi] : which)
        labels.push_back("[" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    sys.set_col_labels(std::move(labels));
    return sys;
}

// All C(points,2) + points closed intervals, ordered by (lo, hi).
inline TraceSystem gen_intervals_all(int points) {
    std::vector<std::pair<int, int>> which;
    for (int lo = 0; lo < points; ++lo)
        for (int hi = lo; hi < points; ++hi) which.emplace_back(lo, hi);
    return gen_intervals(points, which);
}

// Universe 0..points-1; column theta is { x : x >= theta } for theta = 1..l.
inline TraceSystem gen_halfline(int points, int l) {
    if (points < 1 || l < 1 || l >= points) throw DomainError("bad halfline parameters");
    TraceSystem sys(points, l, [&](int r, int c) { return r >= c + 1; });
    std::vector<std::string> labels;
    for (int theta = 1; theta <= l; ++theta) labels.push_back("x>=" + std::to_string(theta));
    sys.set_col_labels(std::move(labels));
    return sys;
}

// Rows = points, column i = the singleton {i}.
inline TraceSystem gen_singletons(int points) {
    if (points < 1) throw DomainError("bad singleton count");
    TraceSystem sys(points, points, [](int r, int c) { return r == c; });
    std::vector<std::string> labels;
    for (int i = 0; i < points; ++i) labels.push_back("{" + std::to_string(i) + "}");
    sys.set_col_labels(std::move(labels));
    return sys;
}

// 2^dim rows: every sign vector on dim columns occurs exactly once. Row r
// spells its own trace, most significant bit first.
inline TraceSystem gen_cube(int dim) {
    if (dim < 1 || dim > 20) throw DomainError("bad cube dimension");
    return TraceSystem(1 << dim, dim,
                       [dim](int r, int c) { return (r >> (dim - 1 - c)) & 1; });
}

// m*m shared rows (cells, row-major); phi columns are row bands, psi columns
// are column bands.
struct GridPair {
    TraceSystem phi;
    TraceSystem psi;
};

inline GridPair gen_grid(int m) {
    if (m < 2) throw DomainError("grid size must be at least 2");
    TraceSystem phi(m * m, m, [m](int r, int c) { return r / m == c; });
    TraceSystem psi(m * m, m, [m](int r, int c) { return r % m == c; });
    std::vector<std::string> rl, cl;
    for (int i = 0; i < m; ++i) rl.push_back("R" + std::to_string(i));
    for (int j = 0; j < m; ++j) cl.push_back("C" + std::to_string(j));
    phi.set_col_labels(std::move(rl));
    psi.set_col_labels(std::move(cl));
    return {std::move(phi), std::move(psi)};
}

// Independent biased bits. Bits are drawn row-major: for each row, then each
// column, one SplitMix64 output u; the entry is 1 iff (u >> 11) * 2^-53 <
// density.
inline TraceSystem gen_random(int rows, int cols, double density, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw DomainError("bad random dimensions");
    if (!(density >= 0.0 && density <= 1.0)) throw DomainError("density must be in [0,1]");
    SplitMix64 rng(seed);
    std::vector<std::vector<bool>> grid(rows, std::vector<bool>(cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) grid[r][c] = rng.next_unit() < density;
    return TraceSystem(rows, cols, [&](int r, int c) { return grid[r][c]; });
}

}  // namespace tracekit
