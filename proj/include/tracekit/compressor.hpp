#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tracekit/pattern_dim.hpp"
#include "tracekit/trace_system.hpp"
#include "tracekit/type_order.hpp"

namespace tracekit {

// Level-by-level family of column sequences: levels[k-1] holds the length-k
// sequences whose every proper prefix fails to *-decide the next entry.
struct Ladder {
    std::vector<std::vector<ColSeq>> levels;
    int height() const { return static_cast<int>(levels.size()); }
};

// Level 1: the columns taking both truth values on the row universe.
inline std::vector<ColSeq> build_B1(const TraceSystem& sys, std::span<const ColId> b) {
    std::vector<ColId> cols(b.begin(), b.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<ColSeq> out;
    for (ColId c : cols) {
        const RowSet& pos = sys.positive_rows(c);
        if (!pos.empty() && pos.count() < sys.row_count()) out.push_back({c});
    }
    return out;
}

// Level n+1 from level n: extend each sequence by every column it does not
// *-decide. A sequence never extends by a column it contains, since literal
// membership decides directly.
inline std::vector<ColSeq> extend_ladder(const OrderContext& ctx, std::span<const ColId> b,
                                         std::span<const ColSeq> prev,
                                         const Budget& budget = {}) {
    std::vector<ColId> cols(b.begin(), b.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<ColSeq> out;
    for (const ColSeq& beta : prev) {
        for (ColId c : cols) {
            if (std::find(beta.begin(), beta.end(), c) != beta.end()) continue;
            budget.charge();
            if (!ctx.star_decides(beta, c).decided()) {
                ColSeq next = beta;
                next.push_back(c);
                out.push_back(std::move(next));
            }
        }
    }
    return out;
}

// All nonempty levels. Entries are pairwise distinct within a sequence, so
// the height never exceeds |B|.
inline Ladder max_ladder(const OrderContext& ctx, std::span<const ColId> b,
                         const Budget& budget = {}) {
    Ladder ladder;
    std::vector<ColSeq> level = build_B1(ctx.sys(), b);
    while (!level.empty()) {
        ladder.levels.push_back(level);
        level = extend_ladder(ctx, b, ladder.levels.back(), budget);
    }
    return ladder;
}

// H(beta): the recursive family of <=_p-minimal subsequences anchoring the
// certificate. For each position i, drop entry i, descend to the first
// canonical minimal member below it one level down, and recurse; beta itself
// closes the set. Deduplicated, then ordered by length with construction
// order breaking ties.
inline std::vector<ColSeq> build_H(const OrderContext& ctx, const Ladder& ladder,
                                   const ColSeq& beta) {
    int n = static_cast<int>(beta.size());
    if (n < 1 || n > ladder.height()) throw DomainError("beta length outside ladder");
    {
        const auto& top = ladder.levels[n - 1];
        if (std::find(top.begin(), top.end(), beta) == top.end())
            throw ContractError("beta is not a member of its ladder level");
        std::vector<ColId> bset = detail::seq_as_set(beta);
        for (const ColSeq& other : top)
            if (ctx.lt_p(detail::seq_as_set(other), bset))
                throw ContractError("beta is not <=_p-minimal in its level");
    }

    std::vector<ColSeq> order;  // construction order
    std::set<ColSeq> seen;
    auto add = [&](const ColSeq& seq) {
        if (seen.insert(seq).second) order.push_back(seq);
    };

    auto rec = [&](auto&& self, const ColSeq& cur) -> void {
        int k = static_cast<int>(cur.size());
        if (k > 1) {
            const auto& below = ladder.levels[k - 2];
            for (int i = 0; i < k; ++i) {
                ColSeq dropped;
                dropped.reserve(k - 1);
                for (int j = 0; j < k; ++j)
                    if (j != i) dropped.push_back(cur[j]);
                if (std::find(below.begin(), below.end(), dropped) == below.end())
                    throw ContractError("ladder subsequence invariant violated");
                std::vector<ColId> dset = detail::seq_as_set(dropped);
                std::vector<ColSeq> family;
                for (const ColSeq& gamma : below)
                    if (ctx.le_p(detail::seq_as_set(gamma), dset)) family.push_back(gamma);
                std::size_t idx = first_minimal_index(ctx, family);
                self(self, family[idx]);
            }
        }
        add(cur);
    };
    rec(rec, beta);

    std::stable_sort(order.begin(), order.end(),
                     [](const ColSeq& a, const ColSeq& b) { return a.size() < b.size(); });
    return order;
}

// The finite content of a uniform type definition: the ladder height, the
// H(beta) sequences with their type signs (ordered by length), and the
// recorded TP bound. A height-0 certificate instead carries the constant
// sign table (every domain column is decided by the empty pattern).
struct CompressionCertificate {
    struct Gamma {
        ColSeq cols;
        std::vector<bool> signs;
    };
    int n = 0;
    std::vector<Gamma> gammas;
    int k_bound = 0;
    int domain_size = 0;
    std::vector<std::pair<ColId, bool>> constant_signs;  // height-0 case only
};

// m = f(n): the padded certificate row count. f(1) = 1, f(n) = n f(n-1) + 1;
// bounded by (n+1)!.
inline std::uint64_t f_of(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f = static_cast<std::uint64_t>(i) * f + 1;
    return f;
}

struct CompressOptions {
    std::optional<int> known_k;  // recorded TP bound; computed when absent
    Budget budget;
};

// Certificate from an already-built ladder (the tail of compress, split out
// so sweeps that inspect the ladder do not build it twice).
inline CompressionCertificate certificate_from_ladder(const OrderContext& ctx,
                                                      const Ladder& ladder,
                                                      std::span<const ColId> cols, int k_bound) {
    CompressionCertificate cert;
    cert.domain_size = static_cast<int>(cols.size());
    cert.k_bound = k_bound;
    cert.n = ladder.height();

    if (cert.n == 0) {
        cert.gammas.push_back({});  // the empty sequence; its pattern holds all rows
        for (ColId c : cols) cert.constant_signs.emplace_back(c, ctx.type().sign_of(c));
        return cert;
    }

    const auto& top = ladder.levels[cert.n - 1];
    const ColSeq& beta = top[first_minimal_index(ctx, top)];
    for (const ColSeq& seq : build_H(ctx, ladder, beta)) {
        CompressionCertificate::Gamma g;
        g.cols = seq;
        for (ColId c : seq) g.signs.push_back(ctx.type().sign_of(c));
        cert.gammas.push_back(std::move(g));
    }
    return cert;
}

inline CompressionCertificate compress(const TraceSystem& sys, std::span<const ColId> b,
                                       const TypeAssignment& t,
                                       const CompressOptions& opts = {}) {
    std::vector<ColId> cols(b.begin(), b.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    if (cols.size() < 2) throw ContractError("compression requires a domain of size >= 2");
    if (cols != t.domain()) throw DomainError("type domain does not match the compression domain");

    OrderContext ctx(sys, t);
    Ladder ladder = max_ladder(ctx, cols, opts.budget);
    int k_bound = opts.known_k ? *opts.known_k : tp_bound_K(sys, opts.budget).k;
    return certificate_from_ladder(ctx, ladder, cols, k_bound);
}

// Run the defining algorithm for one column: scan the stored sequences in
// order, stop at the first that *-decides the column, and emit its verdict.
// Only stored signs and entailment queries against the system are consulted.
inline bool evaluate(const TraceSystem& sys, const CompressionCertificate& cert, ColId c) {
    std::vector<SignedLiteral> lits;
    for (const auto& g : cert.gammas) {
        lits.clear();
        for (std::size_t i = 0; i < g.cols.size(); ++i) lits.push_back({g.cols[i], g.signs[i]});
        StarDecideOutcome out = star_decide_pattern(sys, lits, c);
        if (out.decided()) return *out.verdict();
    }
    throw UndeterminedError("no stored sequence *-decides column " + std::to_string(c), c);
}

inline std::optional<bool> try_evaluate(const TraceSystem& sys,
                                        const CompressionCertificate& cert, ColId c) {
    try {
        return evaluate(sys, cert, c);
    } catch (const UndeterminedError&) {
        return std::nullopt;
    }
}

struct RoundtripReport {
    CompressionCertificate cert;
    std::vector<ColId> mismatches;
    bool clean() const { return mismatches.empty(); }
};

// Evaluate a built certificate against the original sign function. With
// `strict`, additionally require that every stored sequence of the minimal
// deciding length yields the original sign.
inline std::vector<ColId> certificate_mismatches(const TraceSystem& sys,
                                                 const CompressionCertificate& cert,
                                                 const TypeAssignment& t, bool strict = false) {
    std::vector<ColId> mismatches;
    for (ColId c : t.domain()) {
        bool expected = t.sign_of(c);
        std::optional<bool> got = try_evaluate(sys, cert, c);
        if (!got || *got != expected) {
            mismatches.push_back(c);
            continue;
        }
        if (strict) {
            std::optional<std::size_t> min_len;
            std::vector<SignedLiteral> lits;
            for (const auto& g : cert.gammas) {
                if (min_len && g.cols.size() > *min_len) break;
                lits.clear();
                for (std::size_t i = 0; i < g.cols.size(); ++i)
                    lits.push_back({g.cols[i], g.signs[i]});
                StarDecideOutcome out = star_decide_pattern(sys, lits, c);
                if (!out.decided()) continue;
                if (!min_len) min_len = g.cols.size();
                if (*out.verdict() != expected) {
                    mismatches.push_back(c);
                    break;
                }
            }
        }
    }
    return mismatches;
}

// Compress, then evaluate every domain column against the original signs.
inline RoundtripReport verify_roundtrip(const TraceSystem& sys, std::span<const ColId> b,
                                        const TypeAssignment& t, const CompressOptions& opts = {},
                                        bool strict = false) {
    RoundtripReport report;
    report.cert = compress(sys, b, t, opts);
    report.mismatches = certificate_mismatches(sys, report.cert, t, strict);
    return report;
}

// Uniform export: sequences listed with repetition to exactly f(n) rows
// (repeating the last), each padded to n entries by repeating its own last
// entry; the sign grid mirrors the padding.
struct PaddedCertificate {
    std::uint64_t f_n = 0;
    std::vector<std::vector<bool>> s;
    std::vector<std::vector<ColId>> b;
};

inline PaddedCertificate pad_certificate(const CompressionCertificate& cert) {
    if (cert.n < 1) throw ContractError("cannot pad a height-0 certificate");
    PaddedCertificate out;
    out.f_n = f_of(cert.n);
    for (std::uint64_t i = 0; i < out.f_n; ++i) {
        const auto& g = cert.gammas[std::min<std::uint64_t>(i, cert.gammas.size() - 1)];
        std::vector<ColId> cols(g.cols.begin(), g.cols.end());
        std::vector<bool> signs(g.signs.begin(), g.signs.end());
        while (static_cast<int>(cols.size()) < cert.n) {
            cols.push_back(cols.back());
            signs.push_back(signs.back());
        }
        out.b.push_back(std::move(cols));
        out.s.push_back(std::move(signs));
    }
    return out;
}

// Soundness clauses checked for every enumerated ladder member.
struct LadderCheck {
    bool ok = true;
    std::string detail;
};

inline LadderCheck check_basic_bn(const OrderContext& ctx, const Ladder& ladder,
                                  std::span<const ColId> b) {
    const TraceSystem& sys = ctx.sys();
    const TypeAssignment& t = ctx.type();

    auto failed = [&](const char* clause, const ColSeq& beta) {
        std::string detail = std::string(clause) + " fails at <";
        for (std::size_t i = 0; i < beta.size(); ++i)
            detail += (i ? "," : "") + std::to_string(beta[i]);
        return LadderCheck{false, detail + ">"};
    };

    std::vector<std::set<ColSeq>> level_sets;
    for (const auto& level : ladder.levels)
        level_sets.emplace_back(level.begin(), level.end());

    std::vector<ColId> cols(b.begin(), b.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    for (int li = 0; li < ladder.height(); ++li) {
        int n = li + 1;
        for (const ColSeq& beta : ladder.levels[li]) {
            // (i) single perturbations stay consistent
            for (int l = 0; l < n; ++l) {
                std::vector<ColId> flip{beta[l]};
                if (!is_consistent(sys, t.perturb(beta, flip)))
                    return failed("clause (i)", beta);
            }
            // (ii) prefix double perturbations stay consistent
            for (int k = 1; k < n; ++k) {
                std::vector<ColId> prefix(beta.begin(), beta.begin() + k + 1);
                for (int l = 0; l < k; ++l) {
                    std::vector<ColId> flip{beta[l], beta[k]};
                    if (!is_consistent(sys, t.perturb(prefix, flip)))
                        return failed("clause (ii)", beta);
                }
            }
            // (iii) every subsequence sits in its own level
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                ColSeq sub;
                for (int i = 0; i < n; ++i)
                    if ((mask >> i) & 1) sub.push_back(beta[i]);
                int k = static_cast<int>(sub.size());
                if (!level_sets[k - 1].count(sub)) return failed("clause (iii)", beta);
            }
            // (iv) the traced type count exceeds n(n+1)/2
            if (type_count(sys, beta) <= static_cast<std::size_t>(n) * (n + 1) / 2)
                return failed("clause (iv)", beta);
            // (v) undecided extensions appear one level up
            for (ColId c : cols) {
                if (ctx.star_decides(beta, c).decided()) continue;
                ColSeq ext = beta;
                ext.push_back(c);
                bool present = li + 1 < ladder.height() && level_sets[li + 1].count(ext);
                if (!present) return failed("clause (v)", beta);
            }
        }
    }
    return {};
}

}  // namespace tracekit
