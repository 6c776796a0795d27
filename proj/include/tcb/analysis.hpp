#pragma once

#include "tcb/core.hpp"
#include "tcb/harness.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tcb::analysis
{

// Mean over the attempts of one (task, solver, encoding). TIMEOUT and MEMOUT
// attempts are left out of the means and counted in `exclusions`; the means
// are empty when every attempt was excluded.
struct aggregate_record
{
    std::string task_id;
    std::string solver;
    std::string encoding;
    std::optional< double > mean_time_s;
    std::optional< double > mean_mem_bytes;
    std::optional< harness::outcome > consensus; // set iff all attempts agree
    int attempts = 0;
    int exclusions = 0;
    bool anomaly = false;

    bool operator==( const aggregate_record& ) const = default;
};

// Records from sources other than the harness are ignored. The result does
// not depend on input order and is sorted by task order, then solver.
[[nodiscard]] std::vector< aggregate_record > aggregate( const std::vector< harness::run_record >& records );

// Catalogue order of task ids: problem, subcase, clause count.
[[nodiscard]] bool task_order_less( const std::string& a, const std::string& b );

struct table_row
{
    problem prob;
    std::string solver;

    auto operator<=>( const table_row& ) const = default;
};

// Which rows contribute to each column's average. A plain rule averages
// every row; a selective rule names the accepted solvers per column and
// leaves unnamed columns without an average.
struct average_rule
{
    bool plain = true;
    std::map< std::size_t, std::set< std::string > > accepted;

    [[nodiscard]] static average_rule all_rows() { return {}; }
    [[nodiscard]] static average_rule selective( std::map< std::size_t, std::set< std::string > > per_column )
    {
        return { false, std::move( per_column ) };
    }
    [[nodiscard]] bool selects( const table_row& row, std::size_t column ) const;
};

struct summary_table
{
    std::vector< table_row > rows;
    std::vector< std::size_t > columns; // clause counts
    std::vector< std::vector< std::optional< double > > > cells; // [row][column]; empty = gap
    std::vector< std::optional< double > > averages;             // per column
};

// A cell is the mean of mean_time_s over the row's aggregates at that size.
[[nodiscard]] summary_table summary_table_of( const std::vector< aggregate_record >& aggregates,
                                              const std::vector< table_row >& rows,
                                              const std::vector< std::size_t >& columns,
                                              const average_rule& rule );

// Shortest round-trip decimal, independent of the locale.
[[nodiscard]] std::string format_number( double value );

inline constexpr std::string_view csv_header =
        "problem,subcase,n_clauses,solver,encoding,mean_time_s,mean_mem_bytes,outcome,anomaly,exclusions,attempts,"
        "task";

[[nodiscard]] std::string to_csv( const std::vector< aggregate_record >& aggregates );
[[nodiscard]] std::string to_csv( const summary_table& table );
void export_csv( const std::vector< aggregate_record >& aggregates, const std::filesystem::path& path );
void export_csv( const summary_table& table, const std::filesystem::path& path );

inline constexpr std::string_view series_header = "solver\tencoding\tsubcase\tn_clauses\tmean_time_s\tstatus";

// Tab-separated series, one row per point. Problems 1-4 give one file per
// problem with a series per solver; problems 5-8 give one file per solver
// with a series per subcase. Points whose attempts all hit a resource limit
// carry "NA" and status "timeout" or "memout".
[[nodiscard]] std::vector< std::filesystem::path > plot_series( const std::vector< aggregate_record >& aggregates,
                                                                problem prob,
                                                                const std::filesystem::path& out_dir );

} // namespace tcb::analysis
