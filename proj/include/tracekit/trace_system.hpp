#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tracekit/errors.hpp"
#include "tracekit/rowset.hpp"

namespace tracekit {

using ColId = int;
using RowId = int;

// One signed instance: column `col` taken with truth value `sign`.
struct SignedLiteral {
    ColId col = 0;
    bool sign = true;

    bool operator==(const SignedLiteral&) const = default;
};

// A partial sign assignment on columns, at most one literal per column.
// May be semantically inconsistent (no satisfying row); that is detected,
// not prevented.
class SignedPattern {
public:
    SignedPattern() = default;
    explicit SignedPattern(std::vector<SignedLiteral> lits) {
        for (const auto& l : lits) add(l.col, l.sign);
    }

    void add(ColId col, bool sign) {
        auto it = std::lower_bound(lits_.begin(), lits_.end(), col,
                                   [](const SignedLiteral& l, ColId c) { return l.col < c; });
        if (it != lits_.end() && it->col == col)
            throw ContractError("pattern already contains a literal on column " +
                                std::to_string(col));
        lits_.insert(it, SignedLiteral{col, sign});
    }

    // Flip the sign of an existing literal.
    void flip(ColId col) {
        for (auto& l : lits_)
            if (l.col == col) {
                l.sign = !l.sign;
                return;
            }
        throw DomainError("no literal on column " + std::to_string(col));
    }

    std::optional<bool> sign_of(ColId col) const {
        for (const auto& l : lits_)
            if (l.col == col) return l.sign;
        return std::nullopt;
    }

    bool empty() const { return lits_.empty(); }
    std::size_t size() const { return lits_.size(); }
    const std::vector<SignedLiteral>& literals() const { return lits_; }

    bool operator==(const SignedPattern&) const = default;

private:
    std::vector<SignedLiteral> lits_;  // sorted by column id
};

// Immutable boolean matrix. Rows are candidate realizations, columns are
// parameter instances of one fixed partitioned formula; entry(r, c) is the
// truth value of that instance at that realization. Columns are stored as
// row bitsets so pattern semantics become word-parallel intersections.
class TraceSystem {
public:
    TraceSystem(int rows, int cols, const std::function<bool(int, int)>& entry_of)
        : rows_(rows), cols_(cols), uid_(next_uid()) {
        if (rows <= 0 || cols <= 0)
            throw DomainError("trace system dimensions must be positive");
        col_pos_.reserve(cols);
        for (int c = 0; c < cols; ++c) {
            RowSet pos(rows);
            for (int r = 0; r < rows; ++r)
                if (entry_of(r, c)) pos.set(r);
            col_pos_.push_back(std::move(pos));
        }
    }

    int row_count() const { return rows_; }
    int col_count() const { return cols_; }
    std::uint64_t uid() const { return uid_; }

    bool entry(RowId r, ColId c) const {
        check_row(r);
        check_col(c);
        return col_pos_[c].test(r);
    }

    const RowSet& positive_rows(ColId c) const {
        check_col(c);
        return col_pos_[c];
    }

    RowSet literal_rows(const SignedLiteral& l) const {
        check_col(l.col);
        return l.sign ? col_pos_[l.col] : col_pos_[l.col].complement();
    }

    RowSet all_rows() const { return RowSet::all(rows_); }

    void check_col(ColId c) const {
        if (c < 0 || c >= cols_)
            throw DomainError("column " + std::to_string(c) + " out of range (0.." +
                              std::to_string(cols_ - 1) + ")");
    }
    void check_row(RowId r) const {
        if (r < 0 || r >= rows_)
            throw DomainError("row " + std::to_string(r) + " out of range (0.." +
                              std::to_string(rows_ - 1) + ")");
    }

    // Labels are optional; when present they cover every row/column and are
    // unique within their dimension.
    void set_row_labels(std::vector<std::string> labels) {
        if (static_cast<int>(labels.size()) != rows_)
            throw DomainError("row label count mismatch");
        require_unique(labels, "row");
        row_labels_ = std::move(labels);
    }
    void set_col_labels(std::vector<std::string> labels) {
        if (static_cast<int>(labels.size()) != cols_)
            throw DomainError("column label count mismatch");
        require_unique(labels, "column");
        col_labels_ = std::move(labels);
    }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    std::string row_name(RowId r) const {
        check_row(r);
        return row_labels_.empty() ? "r" + std::to_string(r) : row_labels_[r];
    }
    std::string col_name(ColId c) const {
        check_col(c);
        return col_labels_.empty() ? "c" + std::to_string(c) : col_labels_[c];
    }

    std::optional<ColId> col_by_label(std::string_view name) const {
        for (std::size_t i = 0; i < col_labels_.size(); ++i)
            if (col_labels_[i] == name) return static_cast<ColId>(i);
        return std::nullopt;
    }

    bool same_matrix(const TraceSystem& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && col_pos_ == o.col_pos_;
    }

private:
    static std::uint64_t next_uid() {
        static std::atomic<std::uint64_t> counter{1};
        return counter.fetch_add(1);
    }
    static void require_unique(const std::vector<std::string>& v, const char* what) {
        std::unordered_set<std::string> seen;
        for (const auto& s : v) {
            if (s.empty()) throw DomainError(std::string("empty ") + what + " label");
            if (!seen.insert(s).second)
                throw DomainError(std::string("duplicate ") + what + " label '" + s + "'");
        }
    }

    int rows_;
    int cols_;
    std::uint64_t uid_;
    std::vector<RowSet> col_pos_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

namespace detail {

// Bounded thread-local memo for satisfying-row sets, keyed by (system uid,
// literal list). Direct-mapped; stale slots are overwritten.
struct PatternCache {
    struct Slot {
        std::uint64_t sys_uid = 0;
        std::vector<SignedLiteral> key;
        RowSet value;
    };
    static constexpr std::size_t kSlots = 2048;
    std::vector<Slot> slots{kSlots};

    static std::uint64_t mix(std::uint64_t sys_uid, std::span<const SignedLiteral> lits) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ sys_uid;
        for (const auto& l : lits) {
            h ^= (static_cast<std::uint64_t>(l.col) << 1) | (l.sign ? 1 : 0);
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return h;
    }

    const RowSet* find(std::uint64_t sys_uid, std::span<const SignedLiteral> lits) const {
        const Slot& s = slots[mix(sys_uid, lits) % kSlots];
        if (s.sys_uid == sys_uid && s.key.size() == lits.size() &&
            std::equal(s.key.begin(), s.key.end(), lits.begin()))
            return &s.value;
        return nullptr;
    }

    void put(std::uint64_t sys_uid, std::span<const SignedLiteral> lits, RowSet value) {
        Slot& s = slots[mix(sys_uid, lits) % kSlots];
        s.sys_uid = sys_uid;
        s.key.assign(lits.begin(), lits.end());
        s.value = std::move(value);
    }
};

inline PatternCache& pattern_cache() {
    static thread_local PatternCache cache;
    return cache;
}

}  // namespace detail

// Rows satisfying every literal in the list. Duplicate columns are allowed;
// contradictory duplicates yield the empty set.
inline RowSet rows_of_literals(const TraceSystem& sys, std::span<const SignedLiteral> lits) {
    RowSet acc = sys.all_rows();
    for (const auto& l : lits) {
        if (l.sign)
            acc &= sys.positive_rows(l.col);
        else
            acc.and_not(sys.positive_rows(l.col));
        if (acc.empty()) {
            // Still validate remaining columns so errors do not depend on data.
            for (const auto& rest : lits) sys.check_col(rest.col);
            return acc;
        }
    }
    return acc;
}

// Satisfying-row set of a pattern; the empty pattern is satisfied by all rows.
inline RowSet satisfying_rows(const TraceSystem& sys, const SignedPattern& q) {
    const auto& lits = q.literals();
    auto& cache = detail::pattern_cache();
    if (const RowSet* hit = cache.find(sys.uid(), lits)) return *hit;
    RowSet result = rows_of_literals(sys, lits);
    cache.put(sys.uid(), lits, result);
    return result;
}

inline bool is_consistent(const TraceSystem& sys, const SignedPattern& q) {
    return !satisfying_rows(sys, q).empty();
}

// q |- lit. Vacuously true when q is inconsistent.
inline bool entails(const TraceSystem& sys, const SignedPattern& q, const SignedLiteral& lit) {
    return satisfying_rows(sys, q).subset_of(sys.literal_rows(lit));
}

// A realized sign function on an ordered column set: a type over that set.
class TypeAssignment {
public:
    TypeAssignment(const TraceSystem& sys, std::vector<ColId> domain, std::vector<bool> signs)
        : domain_(std::move(domain)), signs_(std::move(signs)) {
        normalize(sys);
        if (satisfying_rows(sys, restrict_to(domain_)).empty())
            throw ContractError("type not realized");
    }

    static TypeAssignment from_row(const TraceSystem& sys, RowId r, std::vector<ColId> domain) {
        sys.check_row(r);
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
        std::vector<bool> signs(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i) signs[i] = sys.entry(r, domain[i]);
        return TypeAssignment(sys, std::move(domain), std::move(signs));
    }

    const std::vector<ColId>& domain() const { return domain_; }
    std::size_t size() const { return domain_.size(); }

    bool sign_of(ColId c) const {
        auto it = std::lower_bound(domain_.begin(), domain_.end(), c);
        if (it == domain_.end() || *it != c)
            throw DomainError("column " + std::to_string(c) + " not in type domain");
        return signs_[static_cast<std::size_t>(it - domain_.begin())];
    }

    bool contains(ColId c) const {
        return std::binary_search(domain_.begin(), domain_.end(), c);
    }

    // p_{B0}: the restriction of this type to B0 (which must sit inside the
    // domain).
    SignedPattern restrict_to(std::span<const ColId> b0) const {
        SignedPattern q;
        for (ColId c : dedup(b0)) q.add(c, sign_of(c));
        return q;
    }

    // p_{B0,B1}: the restriction to B0 with signs flipped exactly on B1.
    SignedPattern perturb(std::span<const ColId> b0, std::span<const ColId> b1) const {
        auto b0s = dedup(b0);
        auto b1s = dedup(b1);
        if (!std::includes(b0s.begin(), b0s.end(), b1s.begin(), b1s.end()))
            throw DomainError("perturbation set is not contained in the restricted set");
        SignedPattern q = restrict_to(b0s);
        for (ColId c : b1s) q.flip(c);
        return q;
    }

    std::string bits() const {
        std::string s;
        s.reserve(signs_.size());
        for (bool b : signs_) s.push_back(b ? '1' : '0');
        return s;
    }

    bool operator==(const TypeAssignment&) const = default;

private:
    static std::vector<ColId> dedup(std::span<const ColId> v) {
        std::vector<ColId> s(v.begin(), v.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    void normalize(const TraceSystem& sys) {
        if (domain_.size() != signs_.size())
            throw DomainError("domain/sign length mismatch");
        std::vector<std::size_t> order(domain_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return domain_[a] < domain_[b]; });
        std::vector<ColId> d;
        std::vector<bool> s;
        d.reserve(domain_.size());
        s.reserve(signs_.size());
        for (std::size_t i : order) {
            if (!d.empty() && d.back() == domain_[i])
                throw DomainError("duplicate column in type domain");
            sys.check_col(domain_[i]);
            d.push_back(domain_[i]);
            s.push_back(signs_[i]);
        }
        domain_ = std::move(d);
        signs_ = std::move(s);
    }

    std::vector<ColId> domain_;  // sorted, unique
    std::vector<bool> signs_;    // parallel to domain_
};

// The realized trace of row r on B0.
inline TypeAssignment trace_of_row(const TraceSystem& sys, RowId r, std::vector<ColId> b0) {
    return TypeAssignment::from_row(sys, r, std::move(b0));
}

// The set of distinct sign vectors realized on B0, as '0'/'1' strings in
// B0's sorted column order. Its cardinality is the local type count.
inline std::vector<std::string> type_space(const TraceSystem& sys, std::span<const ColId> b0) {
    std::vector<ColId> cols(b0.begin(), b0.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (ColId c : cols) sys.check_col(c);
    std::vector<std::string> out;
    for (int r = 0; r < sys.row_count(); ++r) {
        std::string t(cols.size(), '0');
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (sys.entry(r, cols[i])) t[i] = '1';
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::size_t type_count(const TraceSystem& sys, std::span<const ColId> b0) {
    return type_space(sys, b0).size();
}

// All realized types over B0, in ascending sign-vector order.
inline std::vector<TypeAssignment> realized_types(const TraceSystem& sys,
                                                  std::span<const ColId> b0) {
    std::vector<ColId> cols(b0.begin(), b0.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::vector<TypeAssignment> out;
    for (const std::string& bits : type_space(sys, cols)) {
        std::vector<bool> signs(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) signs[i] = bits[i] == '1';
        out.emplace_back(sys, cols, std::move(signs));
    }
    return out;
}

}  // namespace tracekit
