#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracekit/trace_system.hpp"

namespace tracekit {

using ColSeq = std::vector<ColId>;

// q decides column c when its satisfying rows force one sign. Deciding an
// inconsistent antecedent is a contract error: callers test consistency
// first, matching the guarded way perturbations are used.
inline std::optional<bool> decides(const TraceSystem& sys, const SignedPattern& q, ColId c) {
    sys.check_col(c);
    RowSet rows = satisfying_rows(sys, q);
    if (rows.empty()) throw ContractError("decides applied to an inconsistent pattern");
    if (rows.subset_of(sys.positive_rows(c))) return true;
    if (!rows.intersects(sys.positive_rows(c))) return false;
    return std::nullopt;
}

// Pattern-level core of the *-decide predicate, shared by the order context
// and by certificate evaluation (which must never consult the ambient type).
// `lits` is the base pattern as a literal sequence; perturbations flip one
// position at a time.
struct StarDecideOutcome {
    std::optional<bool> direct;
    struct Perturbation {
        int position;  // index into the literal sequence
        bool sign;     // concluded sign for the target column
    };
    std::vector<Perturbation> perturbations;

    bool decided() const { return direct.has_value() || !perturbations.empty(); }

    // The sign the defining algorithm outputs: the direct conclusion, or +
    // exactly when every consistent deciding perturbation concludes +.
    std::optional<bool> verdict() const {
        if (direct) return direct;
        if (perturbations.empty()) return std::nullopt;
        for (const auto& p : perturbations)
            if (!p.sign) return false;
        return true;
    }
};

inline StarDecideOutcome star_decide_pattern(const TraceSystem& sys,
                                             std::span<const SignedLiteral> lits, ColId target) {
    sys.check_col(target);
    StarDecideOutcome out;
    int n = static_cast<int>(lits.size());

    // prefix[i] = rows of lits[0..i), suffix[i] = rows of lits[i..n).
    std::vector<RowSet> prefix(n + 1), suffix(n + 1);
    prefix[0] = sys.all_rows();
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] & sys.literal_rows(lits[i]);
    suffix[n] = sys.all_rows();
    for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] & sys.literal_rows(lits[i]);

    const RowSet& pos = sys.positive_rows(target);
    const RowSet& base = prefix[n];
    if (!base.empty()) {
        if (base.subset_of(pos))
            out.direct = true;
        else if (!base.intersects(pos))
            out.direct = false;
    }
    // An inconsistent base pattern decides nothing here; the ladder
    // construction only ever star-decides from consistent restrictions.

    for (int i = 0; i < n; ++i) {
        RowSet rows = prefix[i];
        rows &= sys.literal_rows({lits[i].col, !lits[i].sign});
        rows &= suffix[i + 1];
        if (rows.empty()) continue;  // perturbation inconsistent
        if (rows.subset_of(pos))
            out.perturbations.push_back({i, true});
        else if (!rows.intersects(pos))
            out.perturbations.push_back({i, false});
    }
    return out;
}

// Outcome of asking whether a column sequence *-decides a target column,
// relative to an ambient type.
struct StarDecision {
    ColId target = 0;
    std::optional<bool> direct;
    struct Perturbation {
        ColId flipped;
        bool sign;
    };
    std::vector<Perturbation> via_perturbations;
    std::optional<bool> correct;  // set when the target is in the type domain

    bool decided() const { return direct.has_value() || !via_perturbations.empty(); }

    std::optional<bool> verdict() const {
        if (direct) return direct;
        if (via_perturbations.empty()) return std::nullopt;
        for (const auto& p : via_perturbations)
            if (!p.sign) return false;
        return true;
    }
};

// A trace system together with an ambient realized type; hosts the <=_p
// quasi-order and *-decisions relative to that type.
class OrderContext {
public:
    OrderContext(const TraceSystem& sys, TypeAssignment t) : sys_(&sys), t_(std::move(t)) {}

    const TraceSystem& sys() const { return *sys_; }
    const TypeAssignment& type() const { return t_; }

    RowSet rows_of(std::span<const ColId> b0) const {
        return satisfying_rows(*sys_, t_.restrict_to(b0));
    }

    // B0 <=_p B1: the restriction to B0 entails the restriction to B1.
    // The empty set is the maximum (its pattern is satisfied by all rows).
    bool le_p(std::span<const ColId> b0, std::span<const ColId> b1) const {
        return rows_of(b0).subset_of(rows_of(b1));
    }
    bool equiv_p(std::span<const ColId> b0, std::span<const ColId> b1) const {
        RowSet r0 = rows_of(b0), r1 = rows_of(b1);
        return r0 == r1 || (r0.subset_of(r1) && r1.subset_of(r0));
    }
    bool lt_p(std::span<const ColId> b0, std::span<const ColId> b1) const {
        RowSet r0 = rows_of(b0), r1 = rows_of(b1);
        return r0.subset_of(r1) && !r1.subset_of(r0);
    }

    StarDecision star_decides(std::span<const ColId> b0, ColId target) const {
        std::vector<ColId> cols(b0.begin(), b0.end());
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        std::vector<SignedLiteral> lits;
        lits.reserve(cols.size());
        for (ColId c : cols) lits.push_back({c, t_.sign_of(c)});

        StarDecideOutcome raw = star_decide_pattern(*sys_, lits, target);
        StarDecision out;
        out.target = target;
        out.direct = raw.direct;
        for (const auto& p : raw.perturbations)
            out.via_perturbations.push_back({lits[p.position].col, p.sign});
        if (out.decided() && t_.contains(target)) {
            if (out.direct) {
                out.correct = true;  // a subtype of p can only decide correctly
            } else {
                bool all = true;
                for (const auto& p : out.via_perturbations)
                    if (p.sign != t_.sign_of(target)) all = false;
                out.correct = all;
            }
        }
        return out;
    }

private:
    const TraceSystem* sys_;
    TypeAssignment t_;
};

namespace detail {

inline std::vector<ColId> seq_as_set(const ColSeq& seq) {
    std::vector<ColId> s(seq);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace detail

// Deterministic descent to a <=_p-minimal member of a finite family of
// column sequences (compared through their underlying sets): repeatedly move
// to the first member, in family order, strictly below the current one.
inline ColSeq minimal_below(const OrderContext& ctx, std::span<const ColSeq> family,
                            const ColSeq& start) {
    auto it = std::find(family.begin(), family.end(), start);
    if (it == family.end()) throw DomainError("start sequence not in family");

    std::vector<std::vector<ColId>> sets;
    sets.reserve(family.size());
    for (const auto& seq : family) sets.push_back(detail::seq_as_set(seq));

    std::size_t cur = static_cast<std::size_t>(it - family.begin());
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (i == cur) continue;
            if (ctx.lt_p(sets[i], sets[cur])) {
                cur = i;
                moved = true;
                break;
            }
        }
    }
    return family[cur];
}

// First member, in family order, with no other member strictly below it.
// This is the deterministic reading of "fix any <=_p-minimal element".
inline std::size_t first_minimal_index(const OrderContext& ctx, std::span<const ColSeq> family) {
    if (family.empty()) throw DomainError("empty family has no minimal element");
    std::vector<std::vector<ColId>> sets;
    sets.reserve(family.size());
    for (const auto& seq : family) sets.push_back(detail::seq_as_set(seq));
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < family.size() && minimal; ++j)
            if (j != i && ctx.lt_p(sets[j], sets[i])) minimal = false;
        if (minimal) return i;
    }
    throw ContractError("no minimal element found in a finite family");  // unreachable
}

}  // namespace tracekit
