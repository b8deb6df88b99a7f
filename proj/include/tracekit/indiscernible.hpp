#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/pattern_dim.hpp"
#include "tracekit/trace_system.hpp"

namespace tracekit {

struct IndiscernibilityResult {
    bool indiscernible = true;
    bool vacuous = false;                        // too few elements for any tuple
    std::optional<std::vector<int>> violation;   // an index tuple that disagrees
    std::optional<std::uint32_t> violation_sign; // the sign vector it disagrees on

    explicit operator bool() const { return indiscernible; }
};

namespace detail {

// Evaluate every sign vector of the oracle on one index tuple, packed one
// bit per sign vector.
inline std::vector<std::uint64_t> sign_profile(const DeltaOracle& oracle,
                                               std::span<const ColId> seq,
                                               std::span<const int> tuple) {
    std::vector<ColId> cols(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) cols[i] = seq[tuple[i]];
    std::vector<std::uint64_t> profile((std::size_t{1} << oracle.arity) / 64 + 1, 0);
    for (std::uint32_t s = 0; s < (1u << oracle.arity); ++s)
        if (oracle.eval(cols, s)) profile[s >> 6] |= 1ull << (s & 63);
    return profile;
}

inline std::uint32_t first_difference(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] != b[w])
            return static_cast<std::uint32_t>(w * 64 + std::countr_zero(a[w] ^ b[w]));
    return 0;
}

template <typename F>
bool for_each_increasing_tuple(int l, int m, F&& f) {
    std::vector<int> t(m);
    for (int i = 0; i < m; ++i) t[i] = i;
    while (true) {
        if (f(std::span<const int>(t))) return true;
        int i = m - 1;
        while (i >= 0 && t[i] == l - m + i) --i;
        if (i < 0) return false;
        ++t[i];
        for (int j = i + 1; j < m; ++j) t[j] = t[j - 1] + 1;
    }
}

template <typename F>
bool for_each_distinct_tuple(int l, int m, F&& f) {
    std::vector<int> t(m, 0);
    std::vector<bool> used(l, false);
    auto rec = [&](auto&& self, int depth) -> bool {
        if (depth == m) return f(std::span<const int>(t));
        for (int v = 0; v < l; ++v) {
            if (used[v]) continue;
            used[v] = true;
            t[depth] = v;
            if (self(self, depth + 1)) return true;
            used[v] = false;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace detail

// All strictly increasing index tuples of the oracle's arity agree on every
// sign vector. Sequences shorter than the arity are vacuously indiscernible,
// flagged as such.
inline IndiscernibilityResult is_delta_indiscernible(std::span<const ColId> seq,
                                                     const DeltaOracle& oracle) {
    int l = static_cast<int>(seq.size());
    int m = oracle.arity;
    if (m > 16) throw DomainError("delta oracle arity too large");
    IndiscernibilityResult result;
    if (l < m) {
        result.vacuous = true;
        return result;
    }
    std::optional<std::vector<std::uint64_t>> reference;
    detail::for_each_increasing_tuple(l, m, [&](std::span<const int> tuple) {
        std::vector<std::uint64_t> profile = detail::sign_profile(oracle, seq, tuple);
        if (!reference) {
            reference = std::move(profile);
            return false;
        }
        if (profile != *reference) {
            result.indiscernible = false;
            result.violation = std::vector<int>(tuple.begin(), tuple.end());
            result.violation_sign = detail::first_difference(profile, *reference);
            return true;
        }
        return false;
    });
    return result;
}

// The set variant quantifies over all distinct tuples, with no ordering
// restriction.
inline IndiscernibilityResult is_delta_indiscernible_set(std::span<const ColId> seq,
                                                          const DeltaOracle& oracle) {
    int l = static_cast<int>(seq.size());
    int m = oracle.arity;
    if (m > 16) throw DomainError("delta oracle arity too large");
    IndiscernibilityResult result;
    if (l < m) {
        result.vacuous = true;
        return result;
    }
    std::optional<std::vector<std::uint64_t>> reference;
    detail::for_each_distinct_tuple(l, m, [&](std::span<const int> tuple) {
        std::vector<std::uint64_t> profile = detail::sign_profile(oracle, seq, tuple);
        if (!reference) {
            reference = std::move(profile);
            return false;
        }
        if (profile != *reference) {
            result.indiscernible = false;
            result.violation = std::vector<int>(tuple.begin(), tuple.end());
            result.violation_sign = detail::first_difference(profile, *reference);
            return true;
        }
        return false;
    });
    return result;
}

// A signed oracle instance: sign vector plus polarity, order sensitive at
// position t. Swapping elements t and t+1 of an increasing tuple flips its
// truth value from true to false.
struct OrderSensitive {
    std::uint32_t smask = 0;
    bool polarity = true;
    int t = 0;
    int arity = 0;

    std::string sign_bits() const {
        std::string s(arity, '0');
        for (int i = 0; i < arity; ++i)
            if ((smask >> i) & 1) s[i] = '1';
        return s;
    }
};

// For a sequence that is indiscernible but not an indiscernible set, find a
// signed instance and adjacent position whose swap flips the value on the
// first arity-many elements. Permutation closure of the instance family
// reduces the general adjacent-transposition argument to exactly this search.
inline OrderSensitive find_order_sensitive(std::span<const ColId> seq,
                                           const DeltaOracle& oracle) {
    if (!is_delta_indiscernible(seq, oracle).indiscernible)
        throw ContractError("sequence is not delta-indiscernible");
    if (is_delta_indiscernible_set(seq, oracle).indiscernible)
        throw ContractError("sequence is already an indiscernible set");

    int m = oracle.arity;
    std::vector<ColId> straight(seq.begin(), seq.begin() + m);
    for (int t = 0; t + 1 < m; ++t) {
        std::vector<ColId> swapped = straight;
        std::swap(swapped[t], swapped[t + 1]);
        for (std::uint32_t s = 0; s < (1u << m); ++s) {
            bool a = oracle.eval(straight, s);
            bool b = oracle.eval(swapped, s);
            if (a != b) return {s, a, t, m};
        }
    }
    throw ContractError("no order-sensitive instance found");  // unreachable: permutation
    // closure moves any disagreement into an adjacent flip on the first elements
}

namespace detail {

inline bool eval_signed(const DeltaOracle& oracle, std::span<const ColId> cols,
                        const OrderSensitive& os) {
    bool v = oracle.eval(cols, os.smask);
    return os.polarity ? v : !v;
}

}  // namespace detail

// theta(y0, y1): the order-sensitive instance with its first t slots bound to
// the sequence prefix and its last slots bound to the suffix. True iff theta
// linearly orders the middle segment: theta(b_i; b_j) holds exactly when
// i < j, for all distinct i, j in [t, L-N+t].
inline bool order_predicate_check(std::span<const ColId> seq, const DeltaOracle& oracle,
                                  const OrderSensitive& os) {
    int l = static_cast<int>(seq.size());
    int m = oracle.arity;  // N + 1
    int n = m - 1;
    if (l <= n) throw ContractError("sequence too short for the order predicate");
    int lo = os.t;
    int hi = l - n + os.t;

    std::vector<ColId> cols(m);
    for (int i = 0; i < os.t; ++i) cols[i] = seq[i];
    for (int i = os.t + 2; i < m; ++i) cols[i] = seq[l - n + i - 1];

    for (int i = lo; i <= hi; ++i) {
        for (int j = lo; j <= hi; ++j) {
            if (i == j) continue;
            cols[os.t] = seq[i];
            cols[os.t + 1] = seq[j];
            if (detail::eval_signed(oracle, cols, os) != (i < j)) return false;
        }
    }
    return true;
}

// Maximal runs of sequence positions where the row satisfies the column.
// Intervals are inclusive [begin, end] index pairs.
inline std::vector<std::pair<int, int>> alternation_blocks(const TraceSystem& sys, RowId r,
                                                           std::span<const ColId> seq) {
    sys.check_row(r);
    std::vector<std::pair<int, int>> blocks;
    int start = -1;
    for (int i = 0; i < static_cast<int>(seq.size()); ++i) {
        bool v = sys.entry(r, seq[i]);
        if (v && start < 0) start = i;
        if (!v && start >= 0) {
            blocks.emplace_back(start, i - 1);
            start = -1;
        }
    }
    if (start >= 0) blocks.emplace_back(start, static_cast<int>(seq.size()) - 1);
    return blocks;
}

// The bounded data defining one type over an indiscernible sequence. The
// set-like case lists at most 2N+1 positions and a sign; the order-like case
// records the order predicate, the prefix/suffix edge signs, and the convex
// block boundaries of a realizing row.
struct SequenceTypeDefinition {
    enum class Kind { set_like, order_like };
    Kind kind = Kind::set_like;
    int n_dim = 0;       // the ambient independence dimension N
    int length = 0;      // L

    // set-like
    std::vector<int> listed;  // positions carrying `listed_sign`
    bool listed_sign = true;

    // order-like
    OrderSensitive order;
    std::vector<int> prefix;                    // positions [0, t)
    std::vector<int> suffix;                    // positions (L-N+t, L)
    std::vector<bool> prefix_signs;
    std::vector<bool> suffix_signs;
    std::vector<std::pair<int, int>> blocks;    // positive runs of the realizer

    bool sign_at(int i) const {
        if (kind == Kind::set_like) {
            bool member = std::find(listed.begin(), listed.end(), i) != listed.end();
            return member == listed_sign;
        }
        if (!prefix.empty() && i < static_cast<int>(prefix.size())) return prefix_signs[i];
        int suffix_start = length - static_cast<int>(suffix.size());
        if (i >= suffix_start) return suffix_signs[i - suffix_start];
        for (auto [lo, hi] : blocks)
            if (lo <= i && i <= hi) return true;
        return false;
    }

    // Shape identity: everything that indexes the defining formula family,
    // independent of the particular sequence positions.
    std::string shape_tag() const {
        if (kind == Kind::set_like)
            return "set/sign=" + std::to_string(listed_sign) +
                   "/k=" + std::to_string(listed.size());
        std::string tag = "ord/t=" + std::to_string(order.t) + "/s=" + order.sign_bits() +
                          "/pol=" + std::to_string(order.polarity) +
                          "/blocks=" + std::to_string(blocks.size()) + "/edges=";
        for (bool s : prefix_signs) tag += s ? '1' : '0';
        tag += ':';
        for (bool s : suffix_signs) tag += s ? '1' : '0';
        return tag;
    }
};

// Build the bounded definition of a realized type over a Delta_{N+1}
// indiscernible sequence, following the two-case split: list positions when
// the sequence is an indiscernible set or short, otherwise anchor an order
// predicate and record block boundaries plus edge signs.
inline SequenceTypeDefinition define_type_over_indiscernible(const TraceSystem& sys,
                                                             std::span<const ColId> seq,
                                                             const TypeAssignment& t,
                                                             std::optional<int> known_dim = {}) {
    int l = static_cast<int>(seq.size());
    if (l < 2) throw ContractError("definable sequences need length >= 2");
    for (ColId c : seq)
        if (!t.contains(c)) throw ContractError("type does not cover the sequence");

    int n = known_dim ? *known_dim : independence_dimension(sys).dim;
    DeltaOracle oracle = delta_N_oracle(sys, n + 1);
    IndiscernibilityResult ind = is_delta_indiscernible(seq, oracle);
    if (!ind.indiscernible) throw ContractError("sequence is not delta-indiscernible");

    SequenceTypeDefinition def;
    def.n_dim = n;
    def.length = l;

    bool is_set = is_delta_indiscernible_set(seq, oracle).indiscernible;
    std::vector<int> positive, negative;
    for (int i = 0; i < l; ++i)
        (t.sign_of(seq[i]) ? positive : negative).push_back(i);

    if (is_set || l <= 2 * n + 1) {
        def.kind = SequenceTypeDefinition::Kind::set_like;
        if (l <= 2 * n + 1) {
            def.listed = positive;
            def.listed_sign = true;
        } else if (static_cast<int>(positive.size()) <= n) {
            def.listed = positive;
            def.listed_sign = true;
        } else if (static_cast<int>(negative.size()) <= n) {
            def.listed = negative;
            def.listed_sign = false;
        } else {
            throw ContractError("indiscernible set exceeds both alternation bounds");
        }
        return def;
    }

    def.kind = SequenceTypeDefinition::Kind::order_like;
    def.order = find_order_sensitive(seq, oracle);
    int tt = def.order.t;
    for (int i = 0; i < tt; ++i) {
        def.prefix.push_back(i);
        def.prefix_signs.push_back(t.sign_of(seq[i]));
    }
    for (int i = l - n + tt + 1; i < l; ++i) {
        def.suffix.push_back(i);
        def.suffix_signs.push_back(t.sign_of(seq[i]));
    }
    // Canonical realizer: the least row satisfying the full type pattern.
    // Any realizer has the same trace on the sequence, hence the same blocks.
    std::vector<ColId> domain(seq.begin(), seq.end());
    RowSet rows = satisfying_rows(sys, t.restrict_to(domain));
    int realizer = rows.first();
    if (realizer < 0) throw ContractError("type not realized on the sequence");
    def.blocks = alternation_blocks(sys, realizer, seq);
    return def;
}

// Brute-force surrogate for the infinite extraction steps: first
// order-preserving subsequence of the requested length passing the
// indiscernibility check, if any.
inline std::optional<std::vector<ColId>> extract_indiscernible_subsequence(
    std::span<const ColId> cols, const DeltaOracle& oracle, int target_len,
    const Budget& budget = {}) {
    int n = static_cast<int>(cols.size());
    if (target_len > n || target_len < 1) throw DomainError("bad target length");
    std::optional<std::vector<ColId>> found;
    detail::for_each_increasing_tuple(n, target_len, [&](std::span<const int> tuple) {
        budget.charge();
        std::vector<ColId> sub(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i) sub[i] = cols[tuple[i]];
        if (is_delta_indiscernible(sub, oracle).indiscernible) {
            found = std::move(sub);
            return true;
        }
        return false;
    });
    return found;
}

// Finite witness core of the TP-to-ICT construction: checked preconditions
// (length, Delta_{4K} indiscernibility, the displayed alternation pattern at
// a realizing row, constant tail), then direct verification of the displayed
// pair consistencies under psi(x; y0, y1) = (phi(x;y0) <-> phi(x;y1)).
struct TpToIctResult {
    bool ok = false;
    std::string failure;
    std::vector<std::pair<ColId, ColId>> c_pairs;  // pair columns i < K
    std::vector<std::pair<ColId, ColId>> d_pairs;  // pair columns K <= i < 2K
};

inline TpToIctResult tp_to_ict_step(const TraceSystem& sys, std::span<const ColId> seq, int k,
                                    RowId a) {
    TpToIctResult res;
    if (k < 1) {
        res.failure = "K must be positive";
        return res;
    }
    if (static_cast<int>(seq.size()) < 6 * k + 2) {
        res.failure = "sequence too short";
        return res;
    }
    sys.check_row(a);
    for (ColId c : seq) sys.check_col(c);

    DeltaOracle oracle = delta_N_oracle(sys, 4 * k);
    IndiscernibilityResult ind = is_delta_indiscernible(seq, oracle);
    if (!ind.indiscernible) {
        std::string tup;
        for (int i : *ind.violation) tup += (tup.empty() ? "" : ",") + std::to_string(i);
        res.failure = "indiscernibility fails at tuple (" + tup + ")";
        return res;
    }

    auto phi = [&](int i) { return sys.entry(a, seq[i]); };
    for (int i = 0; i < 2 * k; ++i)
        if (phi(i)) {
            res.failure = "alternation type fails at index " + std::to_string(i);
            return res;
        }
    if (!phi(2 * k)) {
        res.failure = "alternation type fails at index " + std::to_string(2 * k);
        return res;
    }
    for (int i = 2 * k + 1; i <= 6 * k; ++i)
        if (phi(i)) {
            res.failure = "alternation type fails at index " + std::to_string(i);
            return res;
        }
    if (!phi(6 * k + 1)) {
        res.failure = "alternation type fails at index " + std::to_string(6 * k + 1);
        return res;
    }
    for (int i = 6 * k + 2; i < static_cast<int>(seq.size()); ++i)
        if (phi(i) != phi(6 * k + 2)) {
            res.failure = "tail not constant at index " + std::to_string(i);
            return res;
        }

    // psi-positive rows for pair i: rows where the two columns agree.
    auto agree_rows = [&](int i) {
        const RowSet& p0 = sys.positive_rows(seq[2 * i]);
        const RowSet& p1 = sys.positive_rows(seq[2 * i + 1]);
        RowSet both = p0;
        both &= p1;
        RowSet neither = p0.complement();
        neither.and_not(p1);
        both |= neither;
        return both;
    };
    std::vector<RowSet> agree;
    for (int i = 0; i < 2 * k; ++i) agree.push_back(agree_rows(i));

    for (int l = 0; l < k; ++l) {
        for (int kk = k; kk < 2 * k; ++kk) {
            RowSet acc = sys.all_rows();
            for (int i = 0; i < k; ++i)
                if (i != l) acc &= agree[i];
            acc.and_not(agree[l]);
            for (int i = k + 1; i < 2 * k; ++i)
                if (i != kk) acc &= agree[i];
            acc.and_not(agree[kk]);
            if (acc.empty()) {
                res.failure = "displayed consistency fails at (" + std::to_string(l) + "," +
                              std::to_string(kk) + ")";
                return res;
            }
        }
    }

    for (int i = 0; i < k; ++i) res.c_pairs.emplace_back(seq[2 * i], seq[2 * i + 1]);
    for (int i = k; i < 2 * k; ++i) res.d_pairs.emplace_back(seq[2 * i], seq[2 * i + 1]);
    res.ok = true;
    return res;
}

}  // namespace tracekit
