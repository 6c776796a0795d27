#pragma once

#include "tcb/core.hpp"
#include "tcb/emit.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tcb::harness
{

enum class outcome
{
    sat,
    unsat,
    proved,
    not_proved,
    timeout,
    memout,
    error,
};

[[nodiscard]] std::string_view to_string( outcome o );
[[nodiscard]] outcome parse_outcome( std::string_view text );
[[nodiscard]] inline bool is_resource_failure( outcome o )
{
    return o == outcome::timeout || o == outcome::memout;
}

struct verdict_pattern
{
    std::string regex;
    outcome result;
};

// How to launch one prover and read its verdict. Patterns are tried in
// order against the combined stdout+stderr and the first match wins.
struct solver_adapter
{
    std::string name;
    std::string executable;
    std::vector< std::string > args; // "{input}" is replaced by the input path
    emit::target input;
    std::vector< verdict_pattern > patterns;
    std::vector< std::string > version_args;
};

// Prover9 (LADR), SPASS (TPTP) and InKreSAT (InToHyLo) with editable
// default banners.
[[nodiscard]] std::vector< solver_adapter > default_adapters();

// TCB_<NAME>_PATH, e.g. TCB_SPASS_PATH, replaces the executable.
void apply_env_overrides( std::vector< solver_adapter >& adapters );

struct limits
{
    double timeout_s = 300.0;
    std::optional< std::uint64_t > mem_cap_bytes;
    double grace_s = 0.5;

    void validate() const;
};

struct run_record
{
    std::string task_id;
    std::string solver;
    std::string version;
    int attempt = 1;
    outcome result = outcome::error;
    double wall_time_s = 0.0;
    std::uint64_t peak_mem_bytes = 0;
    std::string encoding;
    std::string timestamp; // UTC ISO-8601 with milliseconds, attempt start
    std::string source = "harness";
    std::string diagnostic; // captured output tail for ERROR outcomes

    // Same identity and verdict; measured time, memory and timestamp may
    // differ between executions.
    [[nodiscard]] bool same_slot( const run_record& other ) const;
};

struct child_status
{
    bool exited = false;
    int exit_code = 0;
    int signal = 0;
};

// Maps the first matching pattern to an outcome, then normalises it for the
// goal: a refutation (PROVED/UNSAT) reads as UNSAT for satisfiability checks
// and PROVED for entailments; saturation (NOT_PROVED/SAT) reads as SAT or
// NOT_PROVED. No match yields ERROR.
[[nodiscard]] outcome classify_output( const solver_adapter& adapter,
                                       emit::goal_kind goal,
                                       const child_status& status,
                                       std::string_view output );

// Absolute path of the adapter's executable, or nullopt if it cannot be run.
[[nodiscard]] std::optional< std::filesystem::path > resolve_executable( const std::string& executable );

// First output line of the version probe; nullopt when the tool is unusable.
[[nodiscard]] std::optional< std::string > probe_version( const solver_adapter& adapter );

struct process_result
{
    child_status status;
    bool timed_out = false;
    double wall_time_s = 0.0;
    std::uint64_t peak_mem_bytes = 0;
    std::string output;
};

// Runs argv[0] with argv in its own process group. On timeout the group gets
// SIGTERM, then SIGKILL once the grace window closes.
[[nodiscard]] process_result run_process( const std::vector< std::string >& argv, const limits& lim );

// Throws tcb::error if the executable cannot be found.
[[nodiscard]] run_record run_solver( const solver_adapter& adapter,
                                     const std::filesystem::path& input,
                                     const limits& lim,
                                     emit::goal_kind goal,
                                     std::string_view version = {} );

// Append-only line-delimited JSON. Field order: source, task, solver,
// version, attempt, outcome, wall_time_s, peak_mem_bytes, encoding,
// timestamp, diagnostic.
class journal
{
    std::filesystem::path _path;

public:
    explicit journal( std::filesystem::path path ) : _path{ std::move( path ) } {}

    [[nodiscard]] const std::filesystem::path& path() const { return _path; }
    [[nodiscard]] std::vector< run_record > load() const;
    void append( const run_record& record ) const;
};

[[nodiscard]] std::string to_json_line( const run_record& record );
[[nodiscard]] run_record parse_json_line( std::string_view line );

struct campaign_options
{
    int repeats = 3;
    std::optional< std::filesystem::path > journal_path;
    std::string encoding = "fol";
    // Stop after this many newly executed attempts; used to model interruption.
    std::optional< std::size_t > max_new_attempts;
    std::function< void( const run_record& ) > on_record;
};

struct prepared_adapter
{
    solver_adapter adapter;
    std::string version;
};

// Runs every (task, adapter, attempt) not already present in the journal,
// strictly one timed child at a time. Returns the complete record set for
// the campaign, journaled records included.
[[nodiscard]] std::vector< run_record > run_benchmark( const catalogue& cat,
                                                       const std::vector< prepared_adapter >& adapters,
                                                       const std::filesystem::path& emitted_dir,
                                                       const limits& lim,
                                                       const campaign_options& opts );

[[nodiscard]] std::string utc_timestamp( std::chrono::system_clock::time_point tp );

} // namespace tcb::harness
