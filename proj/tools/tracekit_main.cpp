#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "tracekit/cli_commands.hpp"

namespace {

using namespace tracekit;
using tracekit::cli::json;

struct CommonArgs {
    std::string input_path;
    std::string gen_spec;
    std::string json_out = "-";
    cli::Options opts;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_input = true) {
    if (needs_input) {
        cmd->add_option("--input", args.input_path, "matrix file to load");
        cmd->add_option("--gen", args.gen_spec, "generator spec (e.g. cube:2, halfline:10:6)");
    }
    cmd->add_option("--json", args.json_out, "report destination path, or - for stdout");
    cmd->add_option("--budget", args.opts.budget, "search budget in work units (0 = unlimited)");
    cmd->add_option("--threads", args.opts.threads, "worker threads for sweeps");
    cmd->add_option("--seed", args.opts.seed, "default seed for random generators");
    cmd->add_flag("--quiet", args.opts.quiet, "suppress progress notes on stderr");
}

TraceSystem load_input(const CommonArgs& args) {
    if (!args.input_path.empty() && !args.gen_spec.empty())
        throw DomainError("choose either --input or --gen");
    if (!args.input_path.empty()) {
        std::ifstream in(args.input_path, std::ios::binary);
        if (!in) throw DomainError("cannot open '" + args.input_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return load_system(buf.str());
    }
    if (!args.gen_spec.empty()) {
        if (!args.gen_spec.empty() && args.gen_spec.front() == '{')
            return cli::parse_gen_spec_json(json::parse(args.gen_spec), args.opts.seed);
        return cli::parse_gen_spec(args.gen_spec, args.opts.seed);
    }
    throw DomainError("an input is required: --input PATH or --gen SPEC");
}

void emit(const CommonArgs& args, const json& report) {
    std::string text = cli::canonical_dump(report);
    if (args.json_out == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        std::ofstream out(args.json_out, std::ios::binary);
        if (!out) throw DomainError("cannot write '" + args.json_out + "'");
        out << text;
    }
}

// Execution details (output path, parallelism, verbosity) stay out of the
// echoed command so reports are byte-stable across equivalent invocations.
std::string echo_command(int argc, char** argv) {
    std::string echo;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--json" || arg == "--threads") {
            ++i;
            continue;
        }
        if (arg.rfind("--json=", 0) == 0 || arg.rfind("--threads=", 0) == 0 || arg == "--quiet")
            continue;
        if (!echo.empty()) echo += ' ';
        echo += arg;
    }
    return echo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite trace-system analysis and type compression"};
    app.require_subcommand(1);

    CommonArgs analyze_args, compress_args, indisc_args, schemes_args, gen_args;

    auto* analyze = app.add_subcommand("analyze", "dimension and pattern diagnostics");
    add_common(analyze, analyze_args);

    auto* compress = app.add_subcommand("compress", "build and verify compression certificates");
    add_common(compress, compress_args);
    std::string domain_csv = "all";
    std::string type_bits;
    int type_row = -1;
    bool all_types = false;
    compress->add_option("--domain", domain_csv, "column ids/labels, CSV, or 'all'");
    compress->add_option("--type", type_bits, "type sign string over the sorted domain");
    compress->add_option("--row", type_row, "take the type traced by this row");
    compress->add_flag("--all-types", all_types, "sweep every realized type");

    auto* indisc = app.add_subcommand("indisc", "indiscernibility analysis of a column sequence");
    add_common(indisc, indisc_args);
    std::string seq_csv = "all";
    indisc->add_option("--seq", seq_csv, "column sequence, CSV, or 'all'");

    auto* schemes = app.add_subcommand("schemes", "definition-scheme validity suites");
    add_common(schemes, schemes_args);
    std::string suite = "compression";
    int max_b = 3;
    schemes->add_option("--suite", suite, "compression|membership|negate|conjoin");
    schemes->add_option("--max-b", max_b, "largest parameter-set size checked");

    auto* gen = app.add_subcommand("gen", "write a generated system as a matrix file");
    add_common(gen, gen_args, false);
    std::string gen_kind;
    std::string out_path;
    int points = 0, thresholds = 0, dim = 0, size = 0, rows = 0, cols = 0;
    double density = 0.5;
    std::string which, variant = "phi";
    gen->add_option("kind", gen_kind,
                    "intervals|halfline|singletons|cube|grid|random|chain4x3|intv4|intvfull")
        ->required();
    gen->add_option("--points", points, "universe size");
    gen->add_option("--thresholds", thresholds, "threshold count (halfline)");
    gen->add_option("--dim", dim, "cube dimension");
    gen->add_option("--size", size, "grid size");
    gen->add_option("--rows", rows, "row count (random)");
    gen->add_option("--cols", cols, "column count (random)");
    gen->add_option("--density", density, "bit density (random)");
    gen->add_option("--which", which, "interval list lo-hi,lo-hi (intervals)");
    gen->add_option("--variant", variant, "phi|psi|theta (grid)");
    gen->add_option("--out", out_path, "output file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) {
            TraceSystem sys = load_input(analyze_args);
            emit(analyze_args, cli::make_report(echo_command(argc, argv), sys,
                                                cli::cmd_analyze(sys, analyze_args.opts)));
        } else if (*compress) {
            TraceSystem sys = load_input(compress_args);
            cli::TypeSelection sel;
            if (all_types)
                sel.all = true;
            else if (!type_bits.empty())
                sel.bits = type_bits;
            else if (type_row >= 0)
                sel.row = type_row;
            else
                throw DomainError("choose --type, --row or --all-types");
            json results = cli::cmd_compress(sys, cli::parse_columns(sys, domain_csv), sel,
                                             compress_args.opts);
            emit(compress_args, cli::make_report(echo_command(argc, argv), sys, results));
        } else if (*indisc) {
            TraceSystem sys = load_input(indisc_args);
            json results =
                cli::cmd_indisc(sys, cli::parse_columns(sys, seq_csv), indisc_args.opts);
            emit(indisc_args, cli::make_report(echo_command(argc, argv), sys, results));
        } else if (*schemes) {
            TraceSystem sys = load_input(schemes_args);
            json results = cli::cmd_schemes(sys, suite, max_b, schemes_args.opts);
            emit(schemes_args, cli::make_report(echo_command(argc, argv), sys, results));
        } else if (*gen) {
            std::string spec = gen_kind;
            if (gen_kind == "cube") spec += ":" + std::to_string(dim);
            if (gen_kind == "singletons") spec += ":" + std::to_string(points);
            if (gen_kind == "halfline")
                spec += ":" + std::to_string(points) + ":" + std::to_string(thresholds);
            if (gen_kind == "intervals")
                spec += ":" + std::to_string(points) + (which.empty() ? ":all" : ":" + which);
            if (gen_kind == "grid") spec += ":" + std::to_string(size) + ":" + variant;
            if (gen_kind == "random")
                spec += ":" + std::to_string(rows) + ":" + std::to_string(cols) + ":" +
                        std::to_string(density) + ":" + std::to_string(gen_args.opts.seed);
            TraceSystem sys = cli::parse_gen_spec(spec, gen_args.opts.seed);
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw DomainError("cannot write '" + out_path + "'");
            out << serialize(sys);
            if (!gen_args.opts.quiet)
                std::cerr << "wrote " << out_path << " (" << sys.row_count() << "x"
                          << sys.col_count() << ")\n";
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 3;
    } catch (const UndeterminedError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
