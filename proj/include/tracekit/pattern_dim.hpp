#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracekit/trace_system.hpp"

namespace tracekit {

namespace detail {

// Visit all size-k subsets of `pool` in lexicographic order. The callback
// returns true to stop early.
template <typename F>
bool for_each_subset(std::span<const ColId> pool, int k, F&& f) {
    int n = static_cast<int>(pool.size());
    if (k > n || k < 0) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<ColId> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (f(std::span<const ColId>(subset))) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline bool is_shattered(const TraceSystem& sys, std::span<const ColId> cols) {
    int k = static_cast<int>(cols.size());
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        RowSet acc = sys.all_rows();
        for (int i = 0; i < k; ++i) {
            if ((s >> i) & 1)
                acc &= sys.positive_rows(cols[i]);
            else
                acc.and_not(sys.positive_rows(cols[i]));
        }
        if (acc.empty()) return false;
    }
    return true;
}

}  // namespace detail

struct IndependenceDim {
    int dim = 0;
    std::vector<ColId> witness;  // a shattered set of size dim
};

// Largest shattered column set among `pool` (default: all columns).
// Exhaustive; the search depth is capped by log2(row_count) since the 2^k
// sign patterns of a shattered set need 2^k distinct rows.
inline IndependenceDim independence_dimension(const TraceSystem& sys,
                                              std::span<const ColId> pool_in = {}) {
    std::vector<ColId> pool(pool_in.begin(), pool_in.end());
    if (pool.empty())
        for (ColId c = 0; c < sys.col_count(); ++c) pool.push_back(c);
    std::sort(pool.begin(), pool.end());
    for (ColId c : pool) sys.check_col(c);

    IndependenceDim best;
    int cap = 0;
    while ((1 << (cap + 1)) <= sys.row_count()) ++cap;
    cap = std::min(cap, static_cast<int>(pool.size()));
    for (int k = 1; k <= cap; ++k) {
        bool found = detail::for_each_subset(pool, k, [&](std::span<const ColId> cols) {
            if (detail::is_shattered(sys, cols)) {
                best.dim = k;
                best.witness.assign(cols.begin(), cols.end());
                return true;
            }
            return false;
        });
        if (!found) break;  // shattering is subset-closed
    }
    return best;
}

// |S(B0)| <= sum_{i<=d} C(|B0|, i) with d the independence dimension of the
// restriction to B0.
inline bool sauer_check(const TraceSystem& sys, std::span<const ColId> b0) {
    std::vector<ColId> cols(b0.begin(), b0.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    int d = independence_dimension(sys, cols).dim;
    std::uint64_t bound = 0;
    std::uint64_t n = cols.size();
    std::uint64_t binom = 1;
    for (int i = 0; i <= d; ++i) {
        bound += binom;
        binom = binom * (n - i) / (i + 1);
    }
    return type_count(sys, cols) <= bound;
}

struct VcDensityCheck {
    bool ok = true;
    std::optional<std::vector<ColId>> failing_b;  // first failure in lex order
};

// True iff every column set of size exactly n traces at most n(n+1)/2
// distinct sign vectors.
inline VcDensityCheck local_vc_density_check(const TraceSystem& sys, int n) {
    if (n < 1 || n > sys.col_count())
        throw DomainError("vc-density size " + std::to_string(n) + " out of range");
    std::vector<ColId> pool;
    for (ColId c = 0; c < sys.col_count(); ++c) pool.push_back(c);
    std::size_t bound = static_cast<std::size_t>(n) * (n + 1) / 2;
    VcDensityCheck result;
    detail::for_each_subset(pool, n, [&](std::span<const ColId> cols) {
        if (type_count(sys, cols) > bound) {
            result.ok = false;
            result.failing_b = std::vector<ColId>(cols.begin(), cols.end());
            return true;
        }
        return false;
    });
    return result;
}

// TP condition at polarity pol: for all l < k < |seq| there is a row
// matching pol at seq[k] and seq[l] and the opposite sign at seq[i] for
// every other i < k. Repeated columns are allowed; repeats make the pattern
// contradictory wherever the definition forces both signs on one column.
inline bool verify_tp_sequence(const TraceSystem& sys, std::span<const ColId> seq, bool pol) {
    if (seq.empty()) throw ContractError("TP sequence must be nonempty");
    for (ColId c : seq) sys.check_col(c);
    std::vector<SignedLiteral> lits;
    for (int k = 1; k < static_cast<int>(seq.size()); ++k) {
        for (int l = 0; l < k; ++l) {
            lits.clear();
            lits.push_back({seq[k], pol});
            lits.push_back({seq[l], pol});
            for (int i = 0; i < k; ++i)
                if (i != l) lits.push_back({seq[i], !pol});
            if (rows_of_literals(sys, lits).empty()) return false;
        }
    }
    return true;
}

struct TpPattern {
    int length = 0;
    std::vector<ColId> witness;
};

// Longest column sequence satisfying the TP condition at the given polarity.
// DFS over distinct-column sequences: any sequence of length >= 3 that
// repeats a column fails the pair condition at the second occurrence, so
// repeats only matter for the length-2 case (b, b).
inline TpPattern max_tp_pattern(const TraceSystem& sys, bool pol, const Budget& budget = {}) {
    TpPattern best{1, {0}};  // a length-1 sequence has no pair conditions

    for (ColId c = 0; c < sys.col_count(); ++c) {
        if (!sys.literal_rows({c, pol}).empty()) {
            best = {2, {c, c}};
            break;
        }
    }

    // Depth-first over distinct-column extensions; a failed pair condition
    // never recovers under extension, so pruning is sound.
    // mask_stack levels hold, per l < |seq|, the rows matching the opposite
    // sign at every seq[i] with i != l; full_stack holds the unrestricted
    // opposite-sign intersection.
    std::vector<ColId> seq;
    std::vector<std::vector<RowSet>> mask_stack;
    std::vector<RowSet> full_stack;

    auto dfs = [&](auto&& self) -> void {
        int m = static_cast<int>(seq.size());
        if (m > best.length) best = {m, seq};
        for (ColId c = 0; c < sys.col_count(); ++c) {
            if (std::find(seq.begin(), seq.end(), c) != seq.end()) continue;
            budget.charge();
            const RowSet& cpos = sys.literal_rows({c, pol});
            // New pair conditions (l, m) for every l < m.
            bool ok = true;
            for (int l = 0; l < m; ++l) {
                RowSet probe = mask_stack.back()[l];
                probe &= cpos;
                probe &= sys.literal_rows({seq[l], pol});
                if (probe.empty()) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            // Extend mask arrays for the next level.
            const RowSet canti = sys.literal_rows({c, !pol});
            std::vector<RowSet> next(m + 1, RowSet());
            for (int l = 0; l < m; ++l) next[l] = mask_stack.back()[l] & canti;
            next[m] = full_stack.back();
            RowSet next_full = full_stack.back() & canti;
            seq.push_back(c);
            mask_stack.push_back(std::move(next));
            full_stack.push_back(std::move(next_full));
            self(self);
            seq.pop_back();
            mask_stack.pop_back();
            full_stack.pop_back();
        }
    };

    mask_stack.push_back({});
    full_stack.push_back(sys.all_rows());
    dfs(dfs);
    return best;
}

struct KBound {
    int k = 0;
    TpPattern positive;
    TpPattern negative;
};

// Least K such that every length-K sequence fails the TP condition in both
// polarities: one more than the longer of the two maximal patterns.
inline KBound tp_bound_K(const TraceSystem& sys, const Budget& budget = {}) {
    KBound b;
    b.positive = max_tp_pattern(sys, true, budget);
    b.negative = max_tp_pattern(sys, false, budget);
    b.k = 1 + std::max(b.positive.length, b.negative.length);
    return b;
}

// ICT condition over a shared row universe: for all l, k there is a row
// positive exactly at bseq[l] among phi columns and exactly at cseq[k] among
// psi columns.
inline bool ict_check(const TraceSystem& sys_phi, const TraceSystem& sys_psi,
                      std::span<const ColId> bseq, std::span<const ColId> cseq) {
    if (sys_phi.row_count() != sys_psi.row_count())
        throw DomainError("ICT check requires a shared row universe");
    if (bseq.empty() || cseq.empty()) throw ContractError("ICT sequences must be nonempty");
    for (ColId c : bseq) sys_phi.check_col(c);
    for (ColId c : cseq) sys_psi.check_col(c);
    for (std::size_t l = 0; l < bseq.size(); ++l) {
        for (std::size_t k = 0; k < cseq.size(); ++k) {
            RowSet acc = sys_phi.all_rows();
            for (std::size_t i = 0; i < bseq.size(); ++i) {
                if (i == l)
                    acc &= sys_phi.positive_rows(bseq[i]);
                else
                    acc.and_not(sys_phi.positive_rows(bseq[i]));
            }
            for (std::size_t j = 0; j < cseq.size(); ++j) {
                if (j == k)
                    acc &= sys_psi.positive_rows(cseq[j]);
                else
                    acc.and_not(sys_psi.positive_rows(cseq[j]));
            }
            if (acc.empty()) return false;
        }
    }
    return true;
}

struct IctToTp {
    TraceSystem theta;
    std::vector<ColId> dseq;
};

// Fuse an ICT witness into a TP witness: one xor column per index, which the
// ICT realizations make positive at exactly the two required places.
inline IctToTp ict_to_tp(const TraceSystem& sys_phi, const TraceSystem& sys_psi,
                         std::span<const ColId> bseq, std::span<const ColId> cseq) {
    if (bseq.size() != cseq.size())
        throw ContractError("ICT-to-TP requires equal-length sequences");
    // Locate the failing pair explicitly so the contract error can name it.
    if (!ict_check(sys_phi, sys_psi, bseq, cseq)) {
        for (std::size_t l = 0; l < bseq.size(); ++l)
            for (std::size_t k = 0; k < cseq.size(); ++k) {
                std::vector<ColId> bl{bseq[l]}, ck{cseq[k]};
                std::vector<ColId> ball(bseq.begin(), bseq.end());
                RowSet acc = sys_phi.all_rows();
                for (std::size_t i = 0; i < bseq.size(); ++i)
                    if (i == l)
                        acc &= sys_phi.positive_rows(bseq[i]);
                    else
                        acc.and_not(sys_phi.positive_rows(bseq[i]));
                for (std::size_t j = 0; j < cseq.size(); ++j)
                    if (j == k)
                        acc &= sys_psi.positive_rows(cseq[j]);
                    else
                        acc.and_not(sys_psi.positive_rows(cseq[j]));
                if (acc.empty())
                    throw ContractError("ICT pattern fails at pair (" + std::to_string(l) + "," +
                                        std::to_string(k) + ")");
            }
    }
    int len = static_cast<int>(bseq.size());
    std::vector<ColId> b(bseq.begin(), bseq.end()), c(cseq.begin(), cseq.end());
    TraceSystem theta(sys_phi.row_count(), len, [&](int r, int i) {
        return sys_phi.entry(r, b[i]) != sys_psi.entry(r, c[i]);
    });
    std::vector<ColId> dseq(len);
    for (int i = 0; i < len; ++i) dseq[i] = i;
    return {std::move(theta), std::move(dseq)};
}

// Delta_N instance family: arity-N sign-vector evaluators. The standard
// oracle evaluates eval(tuple, s) as the consistency of { tuple[i] taken
// with sign s(i) }, which is closed under simultaneously permuting tuple and
// s by construction. Synthetic evaluators may be substituted in tests.
struct DeltaOracle {
    int arity = 0;
    std::function<bool(std::span<const ColId>, std::uint32_t)> fn;

    bool eval(std::span<const ColId> tuple, std::uint32_t smask) const {
        if (static_cast<int>(tuple.size()) != arity)
            throw DomainError("delta oracle arity mismatch");
        return fn(tuple, smask);
    }
};

inline DeltaOracle delta_N_oracle(const TraceSystem& sys, int n) {
    if (n < 1) throw DomainError("delta oracle arity must be positive");
    return DeltaOracle{n, [&sys](std::span<const ColId> tuple, std::uint32_t smask) {
                           std::vector<SignedLiteral> lits;
                           lits.reserve(tuple.size());
                           for (std::size_t i = 0; i < tuple.size(); ++i)
                               lits.push_back({tuple[i], ((smask >> i) & 1) != 0});
                           return !rows_of_literals(sys, lits).empty();
                       }};
}

}  // namespace tracekit
