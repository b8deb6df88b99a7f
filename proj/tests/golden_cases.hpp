#pragma once

// Golden CLI cases shared by the byte-comparison driver and the acceptance
// suite. Each case is a report-producing command line (without --json or
// --threads, which the drivers append).

#include <string>
#include <vector>

namespace golden {

struct Case {
    std::string name;       // golden file stem
    std::string arguments;  // CLI arguments after the program name
};

inline std::vector<Case> cases() {
    return {
        {"analyze_chain4x3", "analyze --gen chain4x3"},
        {"analyze_cube2", "analyze --gen cube:2"},
        {"analyze_intv4", "analyze --gen intv4"},
        {"analyze_random", "analyze --gen random:12:6:0.4:5"},
        {"compress_chain_all", "compress --gen chain4x3 --domain all --all-types"},
        {"compress_cube_all", "compress --gen cube:2 --domain all --all-types"},
        {"compress_halfline_all", "compress --gen halfline:8:5 --domain all --all-types"},
        {"indisc_halfline", "indisc --gen halfline:10:6 --seq all"},
        {"schemes_chain_compression", "schemes --gen chain4x3 --suite compression --max-b 3"},
        {"schemes_singletons_membership",
         "schemes --gen singletons:4 --suite membership --max-b 3"},
    };
}

}  // namespace golden
