#pragma once

#include "tcb/gen.hpp"
#include "tcb/harness.hpp"

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace tcb
{

// Configuration file (JSON). Both sections are optional; omitted keys keep
// their defaults and unknown keys are rejected.
//
// {
//   "generator": {
//     "seed": 20250101, "negation_prob": 0.5, "poisson_lambda": 3.5,
//     "p3_coverage": true, "problems": ["P1", ...],
//     "sizes": { "P1": [50, 100, ...], ... },
//     "p3_multipliers": [2, 3, 4, 5], "p4_lengths": [2, 3, 4, 5],
//     "p6_ratios": [[90, 10], ...]
//   },
//   "harness": {
//     "timeout_s": 300, "mem_cap_bytes": null, "grace_s": 0.5,
//     "repeats": 3, "encoding": "fol",
//     "adapters": [ { "name": "spass", "executable": "SPASS",
//                     "args": ["-TPTP", "{input}"], "input": "tptp",
//                     "version_args": ["-v"],
//                     "patterns": [ { "regex": "...", "outcome": "PROVED" } ] } ]
//   }
// }
struct harness_config
{
    harness::limits lim;
    int repeats = 3;
    emit::encoding_mode encoding = emit::encoding_mode::fol_standard;
    std::vector< harness::solver_adapter > adapters;
};

struct tool_config
{
    gen::gen_config generator;
    harness_config harness;
};

[[nodiscard]] tool_config default_tool_config();
[[nodiscard]] tool_config parse_tool_config( const nlohmann::json& j );
[[nodiscard]] tool_config load_tool_config( const std::filesystem::path& path );

[[nodiscard]] nlohmann::ordered_json to_json( const gen::gen_config& cfg );

// SHA-256 of the canonical JSON rendering of the generator configuration.
[[nodiscard]] std::string config_digest( const gen::gen_config& cfg );

} // namespace tcb
