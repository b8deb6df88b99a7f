#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/compressor.hpp"
#include "tracekit/pattern_dim.hpp"
#include "tracekit/trace_system.hpp"
#include "tracekit/type_order.hpp"

namespace tracekit {

// An arity-k definition scheme: given a candidate column and k parameter
// columns, produce a sign. The sys argument names the system hosting the
// candidate; schemes bound to richer contexts (other systems, products,
// repartitions) capture those at construction and may ignore it.
//
// `witness`, when present, constructively produces a defining parameter
// tuple for a type; scheme_defines falls back to it when the lexicographic
// search space exceeds its budget.
struct DefinitionScheme {
    int arity = 0;
    std::string tag;
    std::function<bool(const TraceSystem&, ColId, std::span<const ColId>)> eval;
    std::function<std::optional<std::vector<ColId>>(const TraceSystem&, const std::vector<ColId>&,
                                                    const TypeAssignment&)>
        witness;
};

struct SchemeSearch {
    std::uint64_t tuple_limit = 200000;  // lexicographic tuples tried before
                                         // falling back to the witness
};

namespace detail {

inline std::vector<ColId> sorted_unique(std::span<const ColId> b) {
    std::vector<ColId> cols(b.begin(), b.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

inline bool scheme_covers(const TraceSystem& sys, const DefinitionScheme& scheme,
                          std::span<const ColId> b, const TypeAssignment& t,
                          std::span<const ColId> params) {
    for (ColId c : b)
        if (scheme.eval(sys, c, params) != t.sign_of(c)) return false;
    return true;
}

}  // namespace detail

// First parameter tuple in B^k (lexicographic over B in ascending column
// order) whose instantiated evaluator reproduces the type, or absent after
// exhausting the space. Requires |B| >= 2; beyond the search budget the
// constructive witness is consulted instead.
inline std::optional<std::vector<ColId>> scheme_defines(const TraceSystem& sys,
                                                        const DefinitionScheme& scheme,
                                                        std::span<const ColId> b_in,
                                                        const TypeAssignment& t,
                                                        const SchemeSearch& search = {}) {
    std::vector<ColId> b = detail::sorted_unique(b_in);
    if (b.size() < 2) throw ContractError("definition domains need size >= 2");
    for (ColId c : b) t.sign_of(c);  // domain errors surface early

    // |B|^k, saturating.
    std::uint64_t space = 1;
    for (int i = 0; i < scheme.arity; ++i) {
        if (space > search.tuple_limit) break;
        space *= b.size();
    }

    if (space <= search.tuple_limit) {
        std::vector<std::size_t> idx(scheme.arity, 0);
        std::vector<ColId> params(scheme.arity);
        while (true) {
            for (int i = 0; i < scheme.arity; ++i) params[i] = b[idx[i]];
            if (detail::scheme_covers(sys, scheme, b, t, params)) return params;
            int i = scheme.arity - 1;
            while (i >= 0 && idx[i] == b.size() - 1) idx[i--] = 0;
            if (i < 0) return std::nullopt;
            ++idx[i];
        }
    }

    if (scheme.witness) {
        if (auto params = scheme.witness(sys, b, t)) {
            if (detail::scheme_covers(sys, scheme, b, t, *params)) return params;
        }
        return std::nullopt;
    }
    throw BudgetError("scheme_defines search space exceeds the tuple budget");
}

struct SchemeValidity {
    bool valid = true;
    std::optional<std::vector<ColId>> failing_b;
    std::optional<std::string> failing_type;
};

// Exhaustively check that the scheme defines every realized type over every
// domain: all column subsets of size 2..max_b by default, or an explicit
// domain family.
inline SchemeValidity scheme_valid(const TraceSystem& sys, const DefinitionScheme& scheme,
                                   int max_b, const SchemeSearch& search = {},
                                   const std::vector<std::vector<ColId>>* domains = nullptr) {
    std::vector<std::vector<ColId>> all;
    if (!domains) {
        if (max_b > sys.col_count()) throw DomainError("max_b exceeds the column count");
        std::vector<ColId> pool;
        for (ColId c = 0; c < sys.col_count(); ++c) pool.push_back(c);
        for (int k = 2; k <= max_b; ++k)
            detail::for_each_subset(pool, k, [&](std::span<const ColId> cols) {
                all.emplace_back(cols.begin(), cols.end());
                return false;
            });
        domains = &all;
    }
    for (const auto& b : *domains) {
        for (const TypeAssignment& t : realized_types(sys, b)) {
            if (!scheme_defines(sys, scheme, b, t, search))
                return {false, b, t.bits()};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Elementary schemes

inline DefinitionScheme constant_scheme(bool sign) {
    DefinitionScheme s;
    s.arity = 1;
    s.tag = sign ? "const+" : "const-";
    s.eval = [sign](const TraceSystem&, ColId, std::span<const ColId>) { return sign; };
    return s;
}

// (candidate equals some parameter)^sign: the listed-positions definition
// used over indiscernible sets.
inline DefinitionScheme membership_scheme(int arity, bool sign) {
    DefinitionScheme s;
    s.arity = arity;
    s.tag = std::string("member") + (sign ? "+" : "-");
    s.eval = [sign](const TraceSystem&, ColId c, std::span<const ColId> params) {
        bool member = std::find(params.begin(), params.end(), c) != params.end();
        return member == sign;
    };
    s.witness = [arity, sign](const TraceSystem&, const std::vector<ColId>& b,
                              const TypeAssignment& t) -> std::optional<std::vector<ColId>> {
        std::vector<ColId> listed;
        for (ColId c : b)
            if (t.sign_of(c) == sign) listed.push_back(c);
        if (listed.empty() || static_cast<int>(listed.size()) > arity) return std::nullopt;
        while (static_cast<int>(listed.size()) < arity) listed.push_back(listed.back());
        return listed;
    };
    return s;
}

// ---------------------------------------------------------------------------
// Many-to-one combination

// Fold finitely many schemes into one: parameters are (z_0..z_{N-1}, w,
// v_0..v_{L-1}) and the verdict is the conjunction, over every slot l with
// w = v_l, of scheme l on the shared z prefix. Selecting w = v_l for exactly
// one l recovers that scheme alone, which is what the witness does.
inline DefinitionScheme combine_many_to_one(std::vector<DefinitionScheme> schemes) {
    if (schemes.empty()) throw ContractError("cannot combine an empty scheme list");
    int n = 0;
    for (const auto& s : schemes) n = std::max(n, s.arity);
    int l_count = static_cast<int>(schemes.size());

    auto shared = std::make_shared<std::vector<DefinitionScheme>>(std::move(schemes));
    DefinitionScheme out;
    out.arity = n + 1 + l_count;
    out.tag = "combined(" + std::to_string(l_count) + ")";
    out.eval = [shared, n, l_count](const TraceSystem& sys, ColId c,
                                    std::span<const ColId> params) {
        ColId w = params[n];
        for (int l = 0; l < l_count; ++l) {
            if (params[n + 1 + l] != w) continue;
            const DefinitionScheme& s = (*shared)[l];
            if (!s.eval(sys, c, params.subspan(0, s.arity))) return false;
        }
        return true;
    };
    out.witness = [shared, n, l_count](
                      const TraceSystem& sys, const std::vector<ColId>& b,
                      const TypeAssignment& t) -> std::optional<std::vector<ColId>> {
        for (int l = 0; l < l_count; ++l) {
            const DefinitionScheme& s = (*shared)[l];
            std::optional<std::vector<ColId>> inner;
            if (s.witness) {
                inner = s.witness(sys, b, t);
            } else {
                try {
                    inner = scheme_defines(sys, s, b, t);
                } catch (const BudgetError&) {
                    inner = std::nullopt;
                }
            }
            if (!inner) continue;
            if (!detail::scheme_covers(sys, s, b, t, *inner)) continue;
            std::vector<ColId> params(*inner);
            while (static_cast<int>(params.size()) < n)
                params.push_back(params.empty() ? b[0] : params.back());
            ColId plain = b[0], marked = b[1];
            params.push_back(marked);  // w
            for (int i = 0; i < l_count; ++i) params.push_back(i == l ? marked : plain);
            return params;
        }
        return std::nullopt;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Boolean combinations

inline TraceSystem complement_system(const TraceSystem& sys) {
    TraceSystem out(sys.row_count(), sys.col_count(),
                    [&](int r, int c) { return !sys.entry(r, c); });
    if (!sys.row_labels().empty()) out.set_row_labels(sys.row_labels());
    if (!sys.col_labels().empty()) out.set_col_labels(sys.col_labels());
    return out;
}

// Negation: flip the verdict. Valid for complement-system types exactly when
// the input is valid for the original.
inline DefinitionScheme negate_scheme(const DefinitionScheme& s) {
    DefinitionScheme out;
    out.arity = s.arity;
    out.tag = "not(" + s.tag + ")";
    auto inner_eval = s.eval;
    out.eval = [inner_eval](const TraceSystem& sys, ColId c, std::span<const ColId> params) {
        return !inner_eval(sys, c, params);
    };
    return out;
}

// Pairwise conjunction system: shared rows, columns are (left, right) column
// pairs with conjoined entries. Pair (ca, cb) is encoded as ca * right_cols + cb.
inline TraceSystem product_system(const TraceSystem& a, const TraceSystem& b) {
    if (a.row_count() != b.row_count())
        throw DomainError("product systems must share the row universe");
    int bc = b.col_count();
    TraceSystem out(a.row_count(), a.col_count() * bc, [&](int r, int c) {
        return a.entry(r, c / bc) && b.entry(r, c % bc);
    });
    return out;
}

// Conjunction of two schemes over the pair product: split every paired
// parameter into its components and conjoin the component verdicts.
inline DefinitionScheme conjoin_schemes(const DefinitionScheme& sa, const TraceSystem& a,
                                        const DefinitionScheme& sb, const TraceSystem& b) {
    if (a.row_count() != b.row_count())
        throw DomainError("conjoined systems must share the row universe");
    auto a_sys = std::make_shared<TraceSystem>(a);
    auto b_sys = std::make_shared<TraceSystem>(b);
    auto ea = sa.eval;
    auto eb = sb.eval;
    int ka = sa.arity, kb = sb.arity;
    int bc = b.col_count();

    DefinitionScheme out;
    out.arity = std::max(ka, kb);
    out.tag = "and(" + sa.tag + "," + sb.tag + ")";
    out.eval = [=](const TraceSystem&, ColId c, std::span<const ColId> params) {
        std::vector<ColId> w(ka), v(kb);
        for (int i = 0; i < ka; ++i) w[i] = params[i] / bc;
        for (int i = 0; i < kb; ++i) v[i] = params[i] % bc;
        return ea(*a_sys, c / bc, w) && eb(*b_sys, c % bc, v);
    };
    return out;
}

// Rectangular parameter domains of the product system: every
// left-set x right-set with both factors of size >= 2, total size <= max_b.
// The conjunction construction pairs component defining tuples positionally,
// which a rectangular domain always allows.
inline std::vector<std::vector<ColId>> rectangular_product_domains(const TraceSystem& a,
                                                                   const TraceSystem& b,
                                                                   int max_b) {
    std::vector<ColId> pa, pb;
    for (ColId c = 0; c < a.col_count(); ++c) pa.push_back(c);
    for (ColId c = 0; c < b.col_count(); ++c) pb.push_back(c);
    std::vector<std::vector<ColId>> out;
    int bc = b.col_count();
    for (int i = 2; i * 2 <= max_b; ++i) {
        for (int j = 2; i * j <= max_b; ++j) {
            detail::for_each_subset(pa, i, [&](std::span<const ColId> left) {
                detail::for_each_subset(pb, j, [&](std::span<const ColId> right) {
                    std::vector<ColId> domain;
                    for (ColId ca : left)
                        for (ColId cb : right) domain.push_back(ca * bc + cb);
                    std::sort(domain.begin(), domain.end());
                    out.push_back(std::move(domain));
                    return false;
                });
                return false;
            });
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compression-backed schemes

namespace detail {

struct CertShape {
    std::vector<int> lens;                 // gamma lengths, stored order
    std::vector<std::vector<bool>> signs;  // per gamma

    bool operator<(const CertShape& o) const {
        return std::tie(lens, signs) < std::tie(o.lens, o.signs);
    }
    bool operator==(const CertShape& o) const = default;
};

inline CertShape shape_of(const CompressionCertificate& cert) {
    CertShape s;
    for (const auto& g : cert.gammas) {
        s.lens.push_back(static_cast<int>(g.cols.size()));
        s.signs.push_back(g.signs);
    }
    return s;
}

// The defining algorithm for a fixed shape: decode the parameter list into
// sequences by the shape's lengths, attach the shape's signs, and run the
// star-decide cascade in stored order.
inline DefinitionScheme shape_scheme(std::shared_ptr<const TraceSystem> base, CertShape shape,
                                     std::optional<int> known_k) {
    int arity = 0;
    for (int len : shape.lens) arity += len;
    DefinitionScheme out;
    out.arity = std::max(arity, 1);
    out.tag = "delta(n=" + std::to_string(shape.lens.empty() ? 0 : shape.lens.back()) + ")";
    auto shape_ptr = std::make_shared<CertShape>(std::move(shape));
    out.eval = [base, shape_ptr](const TraceSystem&, ColId c, std::span<const ColId> params) {
        std::vector<SignedLiteral> lits;
        std::size_t offset = 0;
        if (shape_ptr->lens.empty()) {
            StarDecideOutcome o = star_decide_pattern(*base, lits, c);
            return o.decided() ? *o.verdict() : false;
        }
        for (std::size_t gi = 0; gi < shape_ptr->lens.size(); ++gi) {
            lits.clear();
            for (int i = 0; i < shape_ptr->lens[gi]; ++i)
                lits.push_back({params[offset + i], shape_ptr->signs[gi][i]});
            offset += shape_ptr->lens[gi];
            StarDecideOutcome o = star_decide_pattern(*base, lits, c);
            if (o.decided()) return *o.verdict();
        }
        return false;
    };
    out.witness = [base, shape_ptr, known_k](
                      const TraceSystem&, const std::vector<ColId>& b,
                      const TypeAssignment& t) -> std::optional<std::vector<ColId>> {
        CompressOptions opts;
        opts.known_k = known_k;
        CompressionCertificate cert = compress(*base, b, t, opts);
        if (shape_of(cert) != *shape_ptr) return std::nullopt;
        std::vector<ColId> params;
        for (const auto& g : cert.gammas)
            for (ColId c : g.cols) params.push_back(c);
        if (params.empty()) params.push_back(b[0]);  // height-0: parameter ignored
        return params;
    };
    return out;
}

}  // namespace detail

// The combined uniform definition backed by compression: enumerate the
// certificate shapes arising over the given domains (all subsets of size
// 2..max_b by default), build one defining scheme per shape, and fold them
// many-to-one.
inline DefinitionScheme compression_scheme(const TraceSystem& sys, int max_b,
                                           const std::vector<std::vector<ColId>>* domains = nullptr,
                                           const Budget& budget = {}) {
    auto base = std::make_shared<TraceSystem>(sys);
    int known_k = tp_bound_K(*base, budget).k;

    std::vector<std::vector<ColId>> all;
    if (!domains) {
        if (max_b > sys.col_count()) throw DomainError("max_b exceeds the column count");
        std::vector<ColId> pool;
        for (ColId c = 0; c < sys.col_count(); ++c) pool.push_back(c);
        for (int k = 2; k <= max_b; ++k)
            detail::for_each_subset(pool, k, [&](std::span<const ColId> cols) {
                all.emplace_back(cols.begin(), cols.end());
                return false;
            });
        domains = &all;
    }

    std::vector<detail::CertShape> shapes;  // first-seen order
    for (const auto& b : *domains) {
        for (const TypeAssignment& t : realized_types(*base, b)) {
            budget.charge();
            CompressOptions opts;
            opts.known_k = known_k;
            opts.budget = budget;
            detail::CertShape shape = detail::shape_of(compress(*base, b, t, opts));
            if (std::find(shapes.begin(), shapes.end(), shape) == shapes.end())
                shapes.push_back(std::move(shape));
        }
    }

    std::vector<DefinitionScheme> components;
    components.reserve(shapes.size());
    for (auto& shape : shapes)
        components.push_back(detail::shape_scheme(base, std::move(shape), known_k));
    DefinitionScheme out = combine_many_to_one(std::move(components));
    out.tag = "compression";
    return out;
}

// ---------------------------------------------------------------------------
// Multi-variable systems and the single-variable lift

// Rows are n-tuples over a base set A = {0..a-1} in a fixed big-endian
// mixed-radix bijection with row indices.
class MultiTraceSystem {
public:
    MultiTraceSystem(int base_size, int arity, int cols,
                     const std::function<bool(std::span<const int>, ColId)>& entry,
                     std::uint64_t row_budget = 1u << 20)
        : base_size_(base_size), arity_(arity), base_(make_base(base_size, arity, cols, entry,
                                                               row_budget)) {}

    int base_size() const { return base_size_; }
    int arity() const { return arity_; }
    const TraceSystem& base() const { return base_; }

    int row_of_tuple(std::span<const int> tuple) const {
        int row = 0;
        for (int v : tuple) row = row * base_size_ + v;
        return row;
    }
    std::vector<int> tuple_of_row(int row) const {
        std::vector<int> tuple(arity_);
        for (int i = arity_ - 1; i >= 0; --i) {
            tuple[i] = row % base_size_;
            row /= base_size_;
        }
        return tuple;
    }

    // The repartition moving the last free coordinate into the parameters:
    // a^(n-1) rows over (a * cols) columns, column (v, c) encoded v*cols + c.
    TraceSystem repartition_last() const {
        if (arity_ < 2) throw ContractError("repartition needs arity >= 2");
        int a = base_size_;
        int cols = base_.col_count();
        int rows = base_.row_count() / a;
        return TraceSystem(rows, a * cols, [&, a, cols](int r, int c) {
            return base_.entry(r * a + (c / cols), c % cols);
        });
    }

private:
    static TraceSystem make_base(int a, int n,
                                 int cols,
                                 const std::function<bool(std::span<const int>, ColId)>& entry,
                                 std::uint64_t row_budget) {
        if (a < 1 || n < 1) throw DomainError("bad multi-system parameters");
        std::uint64_t rows = 1;
        for (int i = 0; i < n; ++i) {
            rows *= static_cast<std::uint64_t>(a);
            if (rows > row_budget) throw BudgetError("multi-system row space exceeds the budget");
        }
        std::vector<int> tuple(n);
        return TraceSystem(static_cast<int>(rows), cols, [&](int r, int c) {
            int x = r;
            for (int i = n - 1; i >= 0; --i) {
                tuple[i] = x % a;
                x /= a;
            }
            return entry(tuple, c);
        });
    }

    int base_size_;
    int arity_;
    TraceSystem base_;
};

namespace detail {

inline std::uint64_t upow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline ColId encode_tuple_col(std::span<const ColId> tuple, int cols) {
    std::uint64_t id = 0;
    for (ColId c : tuple) id = id * cols + c;
    return static_cast<ColId>(id);
}

inline std::vector<ColId> decode_tuple_col(ColId id, int cols, int len) {
    std::vector<ColId> tuple(len);
    for (int i = len - 1; i >= 0; --i) {
        tuple[i] = id % cols;
        id /= cols;
    }
    return tuple;
}

}  // namespace detail

// The single-free-variable system behind the lift: rows are values of the
// last coordinate, columns are (k+1)-tuples (b, d_0..d_{k-1}) of original
// columns, and the entry is the hat scheme's verdict at candidate (v, b)
// with parameters (v, d_0)..(v, d_{k-1}).
inline TraceSystem gamma_base_system(const MultiTraceSystem& msys, const TraceSystem& hat_sys,
                                     const DefinitionScheme& scheme_hat,
                                     std::uint64_t col_budget = 1u << 20) {
    int cols = msys.base().col_count();
    int k = scheme_hat.arity;
    std::uint64_t gamma_cols = detail::upow(cols, k + 1);
    if (gamma_cols > col_budget)
        throw BudgetError("gamma system column space exceeds the budget");
    return TraceSystem(msys.base_size(), static_cast<int>(gamma_cols), [&](int v, int c) {
        std::vector<ColId> tuple = detail::decode_tuple_col(c, cols, k + 1);
        ColId candidate = v * cols + tuple[0];
        std::vector<ColId> params(k);
        for (int i = 0; i < k; ++i) params[i] = v * cols + tuple[i + 1];
        return scheme_hat.eval(hat_sys, candidate, params);
    });
}

// Lift a hat scheme (for the repartition with the last coordinate moved into
// the parameters) and a gamma scheme (for the single-variable tuple-column
// system) to a definition scheme for the full n-variable system. The
// evaluator forwards to the gamma scheme on the concatenated tuple column
// (b, d_0..d_{k-1}); the witness retraces the construction: define the hat
// type over (a_n, B), strip the shared first components, then define the
// gamma type over B^(k+1).
inline DefinitionScheme lift_single_variable(const MultiTraceSystem& msys,
                                             const TraceSystem& hat_sys,
                                             const DefinitionScheme& scheme_hat,
                                             const TraceSystem& gamma_sys,
                                             const DefinitionScheme& scheme_gamma,
                                             const SchemeSearch& search = {}) {
    int cols = msys.base().col_count();
    int n = msys.arity();
    int k = n >= 2 ? scheme_hat.arity : 0;
    if (gamma_sys.col_count() != static_cast<int>(detail::upow(cols, k + 1)))
        throw ContractError("gamma system does not match the hat scheme arity");
    if (n >= 2 && hat_sys.col_count() != msys.base_size() * cols)
        throw ContractError("hat system does not match the repartition");

    auto base = std::make_shared<TraceSystem>(msys.base());
    auto hat = std::make_shared<TraceSystem>(hat_sys);
    auto gamma = std::make_shared<TraceSystem>(gamma_sys);
    auto hat_scheme = std::make_shared<DefinitionScheme>(scheme_hat);
    auto gamma_scheme = std::make_shared<DefinitionScheme>(scheme_gamma);
    int m = scheme_gamma.arity;
    int a = msys.base_size();

    DefinitionScheme out;
    out.arity = k + m * (k + 1);
    out.tag = "lift(" + scheme_hat.tag + ";" + scheme_gamma.tag + ")";
    out.eval = [gamma, gamma_scheme, cols, k, m](const TraceSystem&, ColId b,
                                                 std::span<const ColId> params) {
        std::vector<ColId> tuple(k + 1);
        tuple[0] = b;
        for (int i = 0; i < k; ++i) tuple[i + 1] = params[i];
        ColId candidate = detail::encode_tuple_col(tuple, cols);
        std::vector<ColId> gparams(m);
        for (int j = 0; j < m; ++j) {
            std::span<const ColId> block = params.subspan(k + j * (k + 1), k + 1);
            gparams[j] = detail::encode_tuple_col(block, cols);
        }
        return gamma_scheme->eval(*gamma, candidate, gparams);
    };
    out.witness = [base, hat, gamma, hat_scheme, gamma_scheme, cols, k, m, a, n, search](
                      const TraceSystem&, const std::vector<ColId>& b,
                      const TypeAssignment& t) -> std::optional<std::vector<ColId>> {
        int row = satisfying_rows(*base, t.restrict_to(b)).first();
        if (row < 0) return std::nullopt;
        int a_n = row % a;

        std::vector<ColId> d;  // the stripped hat parameters
        if (n >= 2) {
            int hat_row = row / a;
            std::vector<ColId> hat_domain;
            for (ColId c : b) hat_domain.push_back(a_n * cols + c);
            TypeAssignment hat_type = TypeAssignment::from_row(*hat, hat_row, hat_domain);
            auto hat_params = scheme_defines(*hat, *hat_scheme, hat_domain, hat_type, search);
            if (!hat_params) return std::nullopt;
            for (ColId hc : *hat_params) {
                if (hc / cols != a_n) return std::nullopt;  // outside a_n ^ B
                d.push_back(hc % cols);
            }
        }

        // Gamma domain: all (k+1)-tuples over B.
        std::vector<ColId> gamma_domain;
        std::vector<std::size_t> idx(k + 1, 0);
        while (true) {
            std::vector<ColId> tuple(k + 1);
            for (int i = 0; i <= k; ++i) tuple[i] = b[idx[i]];
            gamma_domain.push_back(detail::encode_tuple_col(tuple, cols));
            int i = k;
            while (i >= 0 && idx[i] == b.size() - 1) idx[i--] = 0;
            if (i < 0) break;
            ++idx[i];
        }
        std::sort(gamma_domain.begin(), gamma_domain.end());
        TypeAssignment gamma_type = TypeAssignment::from_row(*gamma, a_n, gamma_domain);
        auto gamma_params = scheme_defines(*gamma, *gamma_scheme, gamma_domain, gamma_type, search);
        if (!gamma_params) return std::nullopt;

        std::vector<ColId> params = d;
        for (ColId gc : *gamma_params)
            for (ColId c : detail::decode_tuple_col(gc, cols, k + 1)) params.push_back(c);
        return params;
    };
    return out;
}

}  // namespace tracekit
