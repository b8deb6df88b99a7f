#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tracekit/certificate_json.hpp"
#include "tracekit/compressor.hpp"
#include "tracekit/fixtures.hpp"
#include "tracekit/generators.hpp"
#include "tracekit/indiscernible.hpp"
#include "tracekit/io.hpp"
#include "tracekit/pattern_dim.hpp"
#include "tracekit/schemes.hpp"
#include "tracekit/trace_system.hpp"

namespace tracekit::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "tracekit 0.1.0";

struct Options {
    int threads = 1;
    std::uint64_t budget = 0;  // 0 = unlimited
    std::uint64_t seed = 1;
    bool quiet = false;
};

// ---------------------------------------------------------------------------
// Generator specs
//
// Compact form, also accepted as a JSON object {"kind": ..., ...}:
//   chain4x3 | intv4 | intvfull
//   cube:D | singletons:P | halfline:P:L | intervals:P[:lo-hi,lo-hi,...]
//   grid:M[:phi|psi|theta] | random:ROWS:COLS:DENSITY:SEED

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

inline TraceSystem parse_gen_spec(const std::string& spec, std::uint64_t default_seed = 1) {
    auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    auto arg = [&](std::size_t i) -> const std::string& {
        if (i >= parts.size())
            throw DomainError("generator spec '" + spec + "' is missing an argument");
        return parts[i];
    };
    auto arg_int = [&](std::size_t i) {
        try {
            return std::stoi(arg(i));
        } catch (const std::exception&) {
            throw DomainError("bad integer in generator spec '" + spec + "'");
        }
    };

    if (kind == "chain4x3") return fixtures::chain4x3();
    if (kind == "intv4") return fixtures::intv4();
    if (kind == "intvfull") return fixtures::intv_full();
    if (kind == "cube") return gen_cube(arg_int(1));
    if (kind == "singletons") return gen_singletons(arg_int(1));
    if (kind == "halfline") return gen_halfline(arg_int(1), arg_int(2));
    if (kind == "intervals") {
        int points = arg_int(1);
        if (parts.size() < 3 || parts[2] == "all") return gen_intervals_all(points);
        std::vector<std::pair<int, int>> which;
        for (const std::string& iv : split(parts[2], ',')) {
            auto dash = iv.find('-');
            if (dash == std::string::npos)
                throw DomainError("bad interval '" + iv + "' in generator spec");
            which.emplace_back(std::stoi(iv.substr(0, dash)), std::stoi(iv.substr(dash + 1)));
        }
        return gen_intervals(points, which);
    }
    if (kind == "grid") {
        int m = arg_int(1);
        std::string which = parts.size() > 2 ? parts[2] : "phi";
        GridPair pair = gen_grid(m);
        if (which == "phi") return std::move(pair.phi);
        if (which == "psi") return std::move(pair.psi);
        if (which == "theta") {
            std::vector<ColId> bands(m);
            for (int i = 0; i < m; ++i) bands[i] = i;
            return ict_to_tp(pair.phi, pair.psi, bands, bands).theta;
        }
        throw DomainError("grid variant must be phi, psi or theta");
    }
    if (kind == "random") {
        double density = std::stod(arg(3));
        std::uint64_t seed = parts.size() > 4 ? std::stoull(arg(4)) : default_seed;
        return gen_random(arg_int(1), arg_int(2), density, seed);
    }
    throw DomainError("unknown generator kind '" + kind + "'");
}

inline TraceSystem parse_gen_spec_json(const json& j, std::uint64_t default_seed = 1) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "random")
        return gen_random(j.at("rows").get<int>(), j.at("cols").get<int>(),
                          j.at("density").get<double>(),
                          j.value("seed", default_seed));
    std::string spec = kind;
    for (const char* key : {"dim", "points", "thresholds", "size", "variant"})
        if (j.contains(key)) {
            if (j.at(key).is_string())
                spec += ":" + j.at(key).get<std::string>();
            else
                spec += ":" + std::to_string(j.at(key).get<int>());
        }
    return parse_gen_spec(spec, default_seed);
}

// ---------------------------------------------------------------------------
// Reports

inline std::string digest(const TraceSystem& sys) {
    std::string bytes = serialize(sys);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

inline json make_report(const std::string& command, const TraceSystem& sys, json results) {
    json report;
    report["command"] = command;
    report["input_digest"] = digest(sys);
    report["results"] = std::move(results);
    report["version"] = kVersion;
    return report;
}

// Canonical serialization: two-space indent, sorted keys (the default json
// object ordering), LF newlines, trailing newline.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

// Parse a CSV column list; entries are ids or column labels.
inline std::vector<ColId> parse_columns(const TraceSystem& sys, const std::string& csv) {
    std::vector<ColId> cols;
    if (csv == "all") {
        for (ColId c = 0; c < sys.col_count(); ++c) cols.push_back(c);
        return cols;
    }
    for (const std::string& tok : split(csv, ',')) {
        if (tok.empty()) throw DomainError("empty column token");
        if (tok.find_first_not_of("0123456789") == std::string::npos) {
            cols.push_back(std::stoi(tok));
        } else if (auto c = sys.col_by_label(tok)) {
            cols.push_back(*c);
        } else {
            throw DomainError("unknown column '" + tok + "'");
        }
        sys.check_col(cols.back());
    }
    return cols;
}

// ---------------------------------------------------------------------------
// Commands

inline json cmd_analyze(const TraceSystem& sys, const Options& opts = {}) {
    Budget budget(opts.budget);
    json results;

    IndependenceDim id = independence_dimension(sys);
    results["id_dim"] = id.dim;
    results["id_witness"] = id.witness;

    KBound kb = tp_bound_K(sys, budget);
    results["tp_K"] = kb.k;
    results["tp_max_positive"] = kb.positive.length;
    results["tp_max_negative"] = kb.negative.length;

    json checks = json::array();
    for (int n = 1; n <= std::min(4, sys.col_count()); ++n) {
        VcDensityCheck check = local_vc_density_check(sys, n);
        json entry;
        entry["N"] = n;
        entry["pass"] = check.ok;
        if (!check.ok) entry["failing_B"] = *check.failing_b;
        checks.push_back(std::move(entry));
    }
    results["vc_density_checks"] = std::move(checks);

    bool sauer_ok = true;
    std::vector<ColId> pool;
    for (ColId c = 0; c < sys.col_count(); ++c) pool.push_back(c);
    for (int k = 1; k <= std::min(4, sys.col_count()) && sauer_ok; ++k)
        detail::for_each_subset(pool, k, [&](std::span<const ColId> cols) {
            budget.charge();
            if (!sauer_check(sys, cols)) {
                sauer_ok = false;
                return true;
            }
            return false;
        });
    results["sauer_ok"] = sauer_ok;
    return results;
}

struct TypeSelection {
    std::optional<std::string> bits;
    std::optional<int> row;
    bool all = false;
};

inline json cmd_compress(const TraceSystem& sys, const std::vector<ColId>& domain_in,
                         const TypeSelection& sel, const Options& opts = {}) {
    Budget budget(opts.budget);
    std::vector<ColId> domain(domain_in);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

    int known_k = tp_bound_K(sys, budget).k;
    std::vector<TypeAssignment> types;
    if (sel.all) {
        types = realized_types(sys, domain);
    } else if (sel.bits) {
        if (sel.bits->size() != domain.size())
            throw DomainError("type bit string length does not match the domain");
        std::vector<bool> signs;
        for (char ch : *sel.bits) {
            if (ch != '0' && ch != '1') throw DomainError("type bits must be 0/1");
            signs.push_back(ch == '1');
        }
        types.emplace_back(sys, domain, signs);  // throws ContractError if unrealized
    } else if (sel.row) {
        types.push_back(TypeAssignment::from_row(sys, *sel.row, domain));
    } else {
        throw DomainError("no type selected");
    }

    std::vector<json> entries(types.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CompressOptions copts;
            copts.known_k = known_k;
            copts.budget = budget;
            RoundtripReport report = verify_roundtrip(sys, domain, types[i], copts, true);
            json entry;
            entry["type"] = types[i].bits();
            entry["ladder_n"] = report.cert.n;
            entry["certificate"] = certificate_to_json(report.cert);
            entry["roundtrip_mismatches"] = report.mismatches;
            entries[i] = std::move(entry);
        }
    };
    int threads = std::max(1, opts.threads);
    if (threads == 1 || types.size() < 2) {
        work(0, types.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (types.size() + threads - 1) / threads;
        for (std::size_t begin = 0; begin < types.size(); begin += chunk)
            pool.emplace_back(work, begin, std::min(begin + chunk, types.size()));
        for (auto& th : pool) th.join();
    }

    int mismatches = 0;
    json list = json::array();
    for (auto& e : entries) {
        mismatches += static_cast<int>(e["roundtrip_mismatches"].size());
        list.push_back(std::move(e));
    }
    json results;
    results["K"] = known_k;
    results["domain"] = domain;
    results["certificates"] = std::move(list);
    results["count"] = types.size();
    results["total_mismatches"] = mismatches;
    return results;
}

inline json cmd_indisc(const TraceSystem& sys, const std::vector<ColId>& seq,
                       const Options& opts = {}) {
    (void)opts;
    json results;
    int n = independence_dimension(sys).dim;
    DeltaOracle oracle = delta_N_oracle(sys, n + 1);
    results["N"] = n;

    IndiscernibilityResult ind = is_delta_indiscernible(seq, oracle);
    IndiscernibilityResult set = is_delta_indiscernible_set(seq, oracle);
    results["indiscernible"] = ind.indiscernible;
    results["set"] = set.indiscernible;
    results["vacuous"] = ind.vacuous;

    int l = static_cast<int>(seq.size());
    if (ind.indiscernible && !set.indiscernible && !ind.vacuous) {
        OrderSensitive os = find_order_sensitive(seq, oracle);
        json sens;
        sens["s"] = os.sign_bits();
        sens["polarity"] = os.polarity ? 1 : 0;
        sens["t"] = os.t;
        results["order_sensitive"] = std::move(sens);
        results["order_predicate_ok"] = l > n && order_predicate_check(seq, oracle, os);
    }

    int max_blocks = 0;
    for (int r = 0; r < sys.row_count(); ++r)
        max_blocks = std::max(max_blocks,
                              static_cast<int>(alternation_blocks(sys, r, seq).size()));
    results["max_blocks"] = max_blocks;

    if (ind.indiscernible && !ind.vacuous && l >= 2) {
        bool definitions_ok = true;
        std::vector<std::string> shapes;
        std::vector<ColId> domain(seq.begin(), seq.end());
        for (const TypeAssignment& t : realized_types(sys, domain)) {
            SequenceTypeDefinition def = define_type_over_indiscernible(sys, seq, t, n);
            for (int i = 0; i < l; ++i)
                if (def.sign_at(i) != t.sign_of(seq[i])) definitions_ok = false;
            if (std::find(shapes.begin(), shapes.end(), def.shape_tag()) == shapes.end())
                shapes.push_back(def.shape_tag());
        }
        results["definitions_ok"] = definitions_ok;
        results["definition_shapes"] = shapes.size();
    }
    return results;
}

inline json cmd_schemes(const TraceSystem& sys, const std::string& suite, int max_b,
                        const Options& opts = {}) {
    Budget budget(opts.budget);
    json results;
    results["suite"] = suite;
    results["max_b"] = max_b;

    auto report = [&](const SchemeValidity& v, const DefinitionScheme& s) {
        results["arity"] = s.arity;
        results["valid"] = v.valid;
        if (!v.valid) {
            results["counterexample_B"] = *v.failing_b;
            results["counterexample_type"] = *v.failing_type;
        }
    };

    int base_b = std::min(max_b, sys.col_count());
    if (suite == "compression") {
        DefinitionScheme s = compression_scheme(sys, base_b, nullptr, budget);
        report(scheme_valid(sys, s, base_b), s);
    } else if (suite == "membership") {
        int n = independence_dimension(sys).dim;
        DefinitionScheme s = combine_many_to_one(
            {membership_scheme(2 * n + 1, true), membership_scheme(2 * n + 1, false)});
        report(scheme_valid(sys, s, base_b), s);
    } else if (suite == "negate") {
        DefinitionScheme s = negate_scheme(compression_scheme(sys, base_b, nullptr, budget));
        TraceSystem comp = complement_system(sys);
        report(scheme_valid(comp, s, base_b), s);
    } else if (suite == "conjoin") {
        DefinitionScheme s = compression_scheme(sys, base_b, nullptr, budget);
        TraceSystem prod = product_system(sys, sys);
        DefinitionScheme conj = conjoin_schemes(s, sys, s, sys);
        auto domains = rectangular_product_domains(sys, sys, max_b);
        report(scheme_valid(prod, conj, max_b, {}, &domains), conj);
    } else {
        throw DomainError("unknown scheme suite '" + suite + "'");
    }
    return results;
}

}  // namespace tracekit::cli
