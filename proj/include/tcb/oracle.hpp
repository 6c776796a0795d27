#pragma once

#include "tcb/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace tcb::oracle
{

// Atom id -> truth value; absent atoms read as false.
using assignment = std::map< std::uint32_t, bool >;

// Ultimately periodic trace s0 .. s(k-1), looping back to s(loop_start).
struct lasso_trace
{
    std::vector< assignment > states;
    std::size_t loop_start = 0;
};

inline constexpr std::size_t max_prop_atoms = 24;
inline constexpr std::size_t max_temporal_atoms = 12;
inline constexpr std::size_t max_trace_states = 6;
// Distinct temporal clauses a non-conjunctive body may contain.
inline constexpr std::size_t max_skeleton_clauses = 20;

// Propositional abstraction: temporal operators erased.
[[nodiscard]] bool evaluate_prop( const compound& body, const assignment& a );

// Reflexive reading evaluated at position 0: liveness holds iff some
// reachable position satisfies the clause, safety iff all do. Every state
// of a lasso is reachable from position 0.
[[nodiscard]] bool evaluate_trace( const compound& body, const lasso_trace& trace );

struct prop_result
{
    bool sat = false;
    assignment witness;
};

// Exhaustive over all 2^k assignments of the k atoms in the body.
[[nodiscard]] prop_result brute_force_prop_sat( const compound& body );

enum class temporal_verdict
{
    sat,
    unknown_up_to_bound,
    unsat_proved,
};

struct temporal_result
{
    temporal_verdict verdict;
    std::optional< lasso_trace > trace;
};

// Searches lasso models with 1..max_states states, fewest states first.
// UNSAT is only claimed for pure conjunctions of temporal clauses (after
// pushing negations through single liveness clauses, conjunctions and
// implications) when max_states exceeds the number of liveness clauses;
// every other exhausted search is UNKNOWN_UP_TO_BOUND.
[[nodiscard]] temporal_result bounded_temporal_sat( const compound& body, std::size_t max_states );

enum class entailment_verdict
{
    entailed,
    not_entailed,
    bound_not_decisive,
};

struct entailment_result
{
    entailment_verdict verdict;
    std::optional< lasso_trace > countermodel;
};

// G entails R iff G and not R has no model.
[[nodiscard]] entailment_result check_entailment_small( const compound& g,
                                                        const temporal_clause& r,
                                                        std::size_t max_states );

} // namespace tcb::oracle
