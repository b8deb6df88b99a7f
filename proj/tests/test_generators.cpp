#include <doctest.h>

#include "tracekit/fixtures.hpp"
#include "tracekit/generators.hpp"
#include "tracekit/indiscernible.hpp"
#include "tracekit/io.hpp"
#include "tracekit/pattern_dim.hpp"

using namespace tracekit;

TEST_CASE("interval generator shapes and membership") {
    CHECK(gen_intervals_all(8).col_count() == 36);
    TraceSystem intv = fixtures::intv4();
    CHECK(trace_of_row(intv, 4, {0, 1, 2, 3}).bits() == "0111");
    CHECK(independence_dimension(intv).dim == 2);
    CHECK_THROWS_AS(gen_intervals(8, {}), DomainError);
    CHECK_THROWS_AS(gen_intervals(8, {{3, 1}}), DomainError);
}

TEST_CASE("halfline thresholds") {
    TraceSystem hl = fixtures::halfline(10, 6);
    CHECK(hl.row_count() == 10);
    CHECK(hl.col_count() == 6);
    CHECK(hl.entry(4, 3));        // 4 >= 4
    CHECK_FALSE(hl.entry(4, 4));  // 4 < 5
    DeltaOracle d2 = delta_N_oracle(hl, 2);
    std::vector<ColId> all{0, 1, 2, 3, 4, 5};
    CHECK(is_delta_indiscernible(all, d2).indiscernible);
    CHECK_FALSE(is_delta_indiscernible_set(all, d2).indiscernible);
}

TEST_CASE("cube realizes every sign vector") {
    TraceSystem cube = gen_cube(2);
    std::vector<ColId> both{0, 1};
    CHECK(type_space(cube, both) == std::vector<std::string>{"00", "01", "10", "11"});
    CHECK_FALSE(local_vc_density_check(cube, 2).ok);
    CHECK(cube.same_matrix(fixtures::cube2()));
}

TEST_CASE("grid bands give an ICT witness of full length") {
    for (int m : {2, 3, 4}) {
        GridPair grid = gen_grid(m);
        std::vector<ColId> bands(m);
        for (int i = 0; i < m; ++i) bands[i] = i;
        CHECK(ict_check(grid.phi, grid.psi, bands, bands));
    }
}

TEST_CASE("singleton traces carry at most one positive sign") {
    TraceSystem s = gen_singletons(5);
    std::vector<ColId> all{0, 1, 2, 3, 4};
    for (const std::string& bits : type_space(s, all)) {
        int positives = 0;
        for (char ch : bits) positives += ch == '1';
        CHECK(positives <= 1);
    }
}

TEST_CASE("identical generator parameters give identical bytes") {
    CHECK(serialize(gen_random(16, 8, 0.37, 99)) == serialize(gen_random(16, 8, 0.37, 99)));
    CHECK(serialize(fixtures::intv_full()) == serialize(fixtures::intv_full()));
    CHECK(serialize(gen_random(16, 8, 0.37, 99)) != serialize(gen_random(16, 8, 0.37, 100)));
}

TEST_CASE("full interval systems satisfy the density bound at N=4") {
    for (int p = 3; p <= 10; ++p) {  // p = 3 is the smallest with 4 columns
        TraceSystem sys = gen_intervals_all(p);
        CHECK(local_vc_density_check(sys, 4).ok);
    }
}
