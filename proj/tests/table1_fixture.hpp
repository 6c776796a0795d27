#pragma once

#include "tcb/analysis.hpp"

#include <fmt/core.h>

namespace tcb::test
{

// Published time cells (seconds) for problems 1-6 at 50, 100, 200 and 500
// clauses, one aggregate per cell.
struct table1_cell_row
{
    problem prob;
    const char* solver;
    double t50, t100, t200, t500;
};

inline constexpr table1_cell_row table1_rows[] = {
    { problem::p1, "prover9", 0.0167, 0.05, 0.0333, 4.6767 },
    { problem::p1, "spass", 0.0533, 0.0767, 0.2067, 1.5333 },
    { problem::p2, "prover9", 0.01, 0.03, 0.1467, 2.7033 },
    { problem::p2, "spass", 0.04, 0.0567, 0.09, 0.68 },
    { problem::p3, "prover9", 0.0333, 0.208, 2.1167, 15.255 },
    { problem::p3, "spass", 0.0547, 0.106, 0.328, 2.2227 },
    { problem::p4, "prover9", 0.01, 0.02, 0.0733, 1.2333 },
    { problem::p4, "spass", 0.4, 0.05, 0.06, 0.2233 },
    { problem::p5, "prover9", 0.0267, 0.1211, 0.8511, 11.7944 },
    { problem::p5, "spass", 0.0767, 0.2711, 1.0689, 16.9989 },
    { problem::p6, "prover9", 0.0167, 0.0433, 0.2867, 3.5567 },
    { problem::p6, "spass", 0.06, 0.1, 0.42, 5.1433 },
    { problem::p1, "inkresat", 0.000238, 0.000540, 0.000681, 0.002454 },
    { problem::p2, "inkresat", 0.000699, 0.000054, 0.011994, 0.000069 },
    { problem::p3, "inkresat", 0.000601, 0.000939, 0.001183, 0.004092 },
    { problem::p4, "inkresat", 0.000271, 0.000370, 0.000673, 0.001977 },
    { problem::p5, "inkresat", 0.000328, 0.000304, 0.000588, 0.003353 },
    { problem::p6, "inkresat", 0.000353, 0.001680, 0.002865, 0.028196 },
};

inline std::vector< analysis::aggregate_record > table1_aggregates()
{
    std::vector< analysis::aggregate_record > out;
    for ( const auto& row : table1_rows )
    {
        const std::pair< std::size_t, double > cells[] = {
            { 50, row.t50 }, { 100, row.t100 }, { 200, row.t200 }, { 500, row.t500 } };
        for ( const auto& [ n, t ] : cells )
        {
            analysis::aggregate_record a;
            a.task_id = fmt::format( "{}_base_{}", to_string( row.prob ), n );
            a.solver = row.solver;
            a.encoding = "fol";
            a.mean_time_s = t;
            a.attempts = 3;
            out.push_back( a );
        }
    }
    return out;
}

} // namespace tcb::test
