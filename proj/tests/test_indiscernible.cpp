#include <doctest.h>

#include <set>

#include "tracekit/fixtures.hpp"
#include "tracekit/generators.hpp"
#include "tracekit/indiscernible.hpp"

using namespace tracekit;

namespace {

std::vector<ColId> iota_cols(int n) {
    std::vector<ColId> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

TEST_CASE("halfline thresholds are an indiscernible sequence, not a set") {
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d2 = delta_N_oracle(hl, 2);
    std::vector<ColId> seq = iota_cols(6);
    CHECK(is_delta_indiscernible(seq, d2).indiscernible);
    CHECK_FALSE(is_delta_indiscernible_set(seq, d2).indiscernible);
}

TEST_CASE("disjoint singletons are an indiscernible set") {
    TraceSystem s = gen_singletons(5);
    DeltaOracle d2 = delta_N_oracle(s, 2);
    std::vector<ColId> seq = iota_cols(4);
    CHECK(is_delta_indiscernible(seq, d2).indiscernible);
    CHECK(is_delta_indiscernible_set(seq, d2).indiscernible);
}

TEST_CASE("too-short sequences are vacuously indiscernible, flagged") {
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d3 = delta_N_oracle(hl, 3);
    std::vector<ColId> seq{0, 1};
    IndiscernibilityResult r = is_delta_indiscernible(seq, d3);
    CHECK(r.indiscernible);
    CHECK(r.vacuous);
}

TEST_CASE("find_order_sensitive on the halfline") {
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d2 = delta_N_oracle(hl, 2);
    std::vector<ColId> seq = iota_cols(6);
    OrderSensitive os = find_order_sensitive(seq, d2);
    CHECK(os.sign_bits() == "10");
    CHECK(os.polarity == true);
    CHECK(os.t == 0);

    // The defining property: swapping the adjacent pair flips truth.
    std::vector<ColId> straight{seq[0], seq[1]}, swapped{seq[1], seq[0]};
    CHECK(d2.eval(straight, os.smask) == os.polarity);
    CHECK(d2.eval(swapped, os.smask) != os.polarity);

    // A reversed sequence still yields a valid sensitive instance.
    std::vector<ColId> reversed{5, 4, 3, 2, 1, 0};
    OrderSensitive ros = find_order_sensitive(reversed, d2);
    std::vector<ColId> rstraight{reversed[0], reversed[1]}, rswapped{reversed[1], reversed[0]};
    bool straight_val = d2.eval(rstraight, ros.smask);
    CHECK((ros.polarity ? straight_val : !straight_val) == true);
    bool swapped_val = d2.eval(rswapped, ros.smask);
    CHECK((ros.polarity ? swapped_val : !swapped_val) == false);

    // Indiscernible sets admit no order-sensitive instance.
    TraceSystem singles = gen_singletons(5);
    DeltaOracle sd2 = delta_N_oracle(singles, 2);
    std::vector<ColId> sseq = iota_cols(4);
    CHECK_THROWS_AS(find_order_sensitive(sseq, sd2), ContractError);
}

TEST_CASE("order_predicate_check") {
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d2 = delta_N_oracle(hl, 2);
    std::vector<ColId> seq = iota_cols(6);
    OrderSensitive os = find_order_sensitive(seq, d2);
    CHECK(order_predicate_check(seq, d2, os));

    // The reversed instance orders the middle segment the wrong way.
    OrderSensitive wrong{0b10, true, 0, 2};
    CHECK_FALSE(order_predicate_check(seq, d2, wrong));
}

TEST_CASE("order predicate on the shortest admissible sequence") {
    // L = N+1 = 2: the middle segment is the whole sequence; the single
    // ordered pair settles the check.
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d2 = delta_N_oracle(hl, 2);
    std::vector<ColId> seq{2, 4};
    OrderSensitive os = find_order_sensitive(seq, d2);
    CHECK(order_predicate_check(seq, d2, os));
}

TEST_CASE("alternation blocks") {
    TraceSystem hl = fixtures::halfline(10, 6);
    std::vector<ColId> seq = iota_cols(6);
    CHECK(alternation_blocks(hl, 4, seq) ==
          std::vector<std::pair<int, int>>{{0, 3}});  // thresholds 1..4 hold at x=4
    CHECK(alternation_blocks(hl, 0, seq).empty());

    TraceSystem singles = gen_singletons(5);
    std::vector<ColId> sseq = iota_cols(5);
    for (int r = 0; r < 5; ++r) {
        auto blocks = alternation_blocks(singles, r, sseq);
        REQUIRE(blocks.size() == 1);
        CHECK(blocks[0] == std::pair<int, int>{r, r});
    }
}

TEST_CASE("block counts stay within N+1 on indiscernible fixtures") {
    TraceSystem hl = fixtures::halfline(10, 6);
    std::vector<ColId> seq = iota_cols(6);
    for (int r = 0; r < hl.row_count(); ++r)
        CHECK(alternation_blocks(hl, r, seq).size() <= 2);  // N = 1

    TraceSystem singles = gen_singletons(6);
    std::vector<ColId> sseq = iota_cols(6);
    for (int r = 0; r < 6; ++r)
        CHECK(alternation_blocks(singles, r, sseq).size() <= 2);
}

TEST_CASE("define_type_over_indiscernible on the halfline") {
    TraceSystem hl = fixtures::halfline(10, 6);
    std::vector<ColId> seq = iota_cols(6);

    TypeAssignment t4 = TypeAssignment::from_row(hl, 4, seq);
    SequenceTypeDefinition def = define_type_over_indiscernible(hl, seq, t4, 1);
    CHECK(def.kind == SequenceTypeDefinition::Kind::order_like);
    REQUIRE(def.blocks.size() == 1);
    CHECK(def.blocks[0] == std::pair<int, int>{0, 3});  // boundary between columns 4 and 5
    for (int i = 0; i < 6; ++i) CHECK(def.sign_at(i) == t4.sign_of(seq[i]));

    // Every realized type is reproduced.
    for (const TypeAssignment& t : realized_types(hl, seq)) {
        SequenceTypeDefinition d = define_type_over_indiscernible(hl, seq, t, 1);
        for (int i = 0; i < 6; ++i) CHECK(d.sign_at(i) == t.sign_of(seq[i]));
    }
}

TEST_CASE("define_type_over_indiscernible on an indiscernible set") {
    TraceSystem singles = gen_singletons(4);
    std::vector<ColId> seq = iota_cols(4);
    TypeAssignment t2 = TypeAssignment::from_row(singles, 2, seq);
    SequenceTypeDefinition def = define_type_over_indiscernible(singles, seq, t2, 1);
    CHECK(def.kind == SequenceTypeDefinition::Kind::set_like);
    CHECK(def.listed == std::vector<int>{2});
    CHECK(def.listed_sign == true);
    for (int i = 0; i < 4; ++i) CHECK(def.sign_at(i) == t2.sign_of(seq[i]));
}

TEST_CASE("short sequences take the listing branch") {
    TraceSystem hl = fixtures::halfline(10, 6);
    std::vector<ColId> seq{2, 3};  // L = 2 <= 2N+1
    TypeAssignment t = TypeAssignment::from_row(hl, 3, seq);
    SequenceTypeDefinition def = define_type_over_indiscernible(hl, seq, t, 1);
    CHECK(def.kind == SequenceTypeDefinition::Kind::set_like);
    for (int i = 0; i < 2; ++i) CHECK(def.sign_at(i) == t.sign_of(seq[i]));
}

TEST_CASE("order-like definitions with a nontrivial edge") {
    // Nested initial segments [0,k] for k = 0..6 inside the full interval
    // system: delta_3-indiscernible, not a set, with N = 2.
    TraceSystem intv = fixtures::intv_full();
    std::vector<ColId> seq = iota_cols(7);  // [0,0], [0,1], ..., [0,6]
    DeltaOracle d3 = delta_N_oracle(intv, 3);
    CHECK(is_delta_indiscernible(seq, d3).indiscernible);
    CHECK_FALSE(is_delta_indiscernible_set(seq, d3).indiscernible);

    std::set<std::string> shapes;
    for (const TypeAssignment& t : realized_types(intv, seq)) {
        SequenceTypeDefinition def = define_type_over_indiscernible(intv, seq, t, 2);
        for (int i = 0; i < 7; ++i) CHECK(def.sign_at(i) == t.sign_of(seq[i]));
        if (def.kind == SequenceTypeDefinition::Kind::order_like)
            CHECK(def.blocks.size() <= 3);
        shapes.insert(def.shape_tag());
    }
    CHECK(shapes.size() <= 8);
}

TEST_CASE("definition shapes depend on the dimension data, not the length") {
    auto shapes_of = [](const TraceSystem& sys, int len) {
        std::vector<ColId> seq = iota_cols(len);
        std::set<std::string> shapes;
        for (const TypeAssignment& t : realized_types(sys, seq))
            shapes.insert(define_type_over_indiscernible(sys, seq, t, 1).shape_tag());
        return shapes;
    };
    TraceSystem short_hl = fixtures::halfline(10, 6);
    TraceSystem long_hl = fixtures::halfline(14, 9);
    CHECK(shapes_of(short_hl, 6) == shapes_of(long_hl, 9));
}

TEST_CASE("define_type guards") {
    TraceSystem hl = fixtures::halfline(10, 6);
    std::vector<ColId> one{0};
    TypeAssignment t = TypeAssignment::from_row(hl, 3, one);
    CHECK_THROWS_AS(define_type_over_indiscernible(hl, one, t, 1), ContractError);
}

TEST_CASE("extract_indiscernible_subsequence") {
    TraceSystem hl = fixtures::halfline(10, 6);
    DeltaOracle d2 = delta_N_oracle(hl, 2);

    std::vector<ColId> sorted = iota_cols(6);
    CHECK(extract_indiscernible_subsequence(sorted, d2, 6) == sorted);

    std::vector<ColId> shuffled{2, 0, 1, 4, 3, 5};
    auto sub = extract_indiscernible_subsequence(shuffled, d2, 4);
    REQUIRE(sub.has_value());
    CHECK(is_delta_indiscernible(*sub, d2).indiscernible);

    std::vector<ColId> hostile{0, 5, 2};  // the only length-3 candidate disagrees
    CHECK_FALSE(extract_indiscernible_subsequence(hostile, d2, 3).has_value());
}

TEST_CASE("tp_to_ict_step guards") {
    TraceSystem cube = gen_cube(8);
    std::vector<ColId> seq = iota_cols(8);

    std::vector<ColId> shorter(seq.begin(), seq.begin() + 7);
    CHECK(tp_to_ict_step(cube, shorter, 1, 0).failure == "sequence too short");

    TraceSystem hl = gen_halfline(12, 8);
    std::vector<ColId> scrambled{0, 2, 1, 3, 4, 5, 6, 7};
    TpToIctResult bad = tp_to_ict_step(hl, scrambled, 1, 0);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failure.find("indiscernibility fails at tuple") == 0);

    // Monotone traces cannot realize the displayed alternation.
    std::vector<ColId> hseq = iota_cols(8);
    TpToIctResult alt = tp_to_ict_step(hl, hseq, 1, 5);
    CHECK_FALSE(alt.ok);
    CHECK(alt.failure.find("alternation type fails") == 0);
}

TEST_CASE("wide oracles with more than 64 sign vectors") {
    // Arity 8 means 256 sign vectors per profile; threshold columns stay
    // indiscernible (only monotone sign vectors are consistent, for every
    // increasing tuple) while any inversion breaks it.
    TraceSystem hl = gen_halfline(16, 14);
    DeltaOracle d8 = delta_N_oracle(hl, 8);
    std::vector<ColId> seq(14);
    for (int i = 0; i < 14; ++i) seq[i] = i;
    CHECK(is_delta_indiscernible(seq, d8).indiscernible);

    std::swap(seq[1], seq[2]);
    IndiscernibilityResult r = is_delta_indiscernible(seq, d8);
    CHECK_FALSE(r.indiscernible);
    REQUIRE(r.violation.has_value());

    // The K=2 step (arity 8) rejects the scrambled sequence through the
    // same profile comparison.
    TpToIctResult res = tp_to_ict_step(hl, seq, 2, 0);
    CHECK_FALSE(res.ok);
    CHECK(res.failure.find("indiscernibility fails") == 0);
}

TEST_CASE("tp_to_ict_step verifies a conforming witness") {
    // The full 8-cube: every sign pattern is realized, so the column
    // sequence is indiscernible for every arity and row 33 spells the
    // alternation 0,0,1,0,0,0,0,1.
    TraceSystem cube = gen_cube(8);
    std::vector<ColId> seq = iota_cols(8);
    TpToIctResult res = tp_to_ict_step(cube, seq, 1, 33);
    INFO(res.failure);
    CHECK(res.ok);
    CHECK(res.c_pairs == std::vector<std::pair<ColId, ColId>>{{0, 1}});
    CHECK(res.d_pairs == std::vector<std::pair<ColId, ColId>>{{2, 3}});
}
