#pragma once

#include "tracekit/generators.hpp"
#include "tracekit/trace_system.hpp"

namespace tracekit::fixtures {

// Named constant systems used throughout the test and acceptance suites.
// All are regenerated deterministically.

// 4 rows a0..a3 over columns b0,b1,b2 with traces 000, 100, 110, 111.
inline TraceSystem chain4x3() {
    static const bool grid[4][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    TraceSystem sys(4, 3, [](int r, int c) { return grid[r][c]; });
    sys.set_row_labels({"a0", "a1", "a2", "a3"});
    sys.set_col_labels({"b0", "b1", "b2"});
    return sys;
}

// 4 rows spelling 00, 01, 10, 11 over 2 columns: the full sign cube.
inline TraceSystem cube2() { return gen_cube(2); }

// Universe 0..7; the four intervals [0,3], [2,5], [4,7], [1,6].
inline TraceSystem intv4() {
    return gen_intervals(8, {{0, 3}, {2, 5}, {4, 7}, {1, 6}});
}

// Universe 0..7; all 36 closed intervals.
inline TraceSystem intv_full() { return gen_intervals_all(8); }

// Universe 0..points-1 with threshold columns x >= 1 .. x >= l.
inline TraceSystem halfline(int points = 10, int l = 6) { return gen_halfline(points, l); }

inline GridPair grid(int m) { return gen_grid(m); }

inline TraceSystem singletons(int points = 5) { return gen_singletons(points); }

}  // namespace tracekit::fixtures
