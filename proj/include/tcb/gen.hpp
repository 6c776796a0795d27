#pragma once

#include "tcb/core.hpp"
#include "tcb/rng.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace tcb::gen
{

struct group_spec
{
    std::size_t length;
    clause_kind kind;
    std::size_t count;

    friend bool operator==( const group_spec&, const group_spec& ) = default;
};

struct ratio
{
    int liveness;
    int safety;

    [[nodiscard]] double liveness_share() const { return double( liveness ) / double( liveness + safety ); }
    [[nodiscard]] std::string label() const;

    friend bool operator==( const ratio&, const ratio& ) = default;
};

struct gen_config
{
    std::uint64_t seed = 20250101;
    double negation_prob = 0.5;
    double poisson_lambda = 3.5;
    bool p3_coverage = true;
    std::vector< problem > problems;
    std::map< problem, std::vector< std::size_t > > sizes;
    std::vector< double > p3_multipliers;
    std::vector< std::size_t > p4_lengths;
    std::vector< ratio > p6_ratios;

    // Throws tcb::error naming the first invalid field.
    void validate() const;
};

[[nodiscard]] gen_config default_config();

inline const std::vector< std::size_t > standard_lengths{ 2, 3, 4, 6, 8, 10 };
inline const std::vector< std::size_t > disparate_lengths{ 1, 5, 10, 20 };

// Largest-remainder apportionment of `total` seats by `weights`. Ties in the
// fractional part go to the lower index.
[[nodiscard]] std::vector< std::size_t > apportion( std::size_t total, std::span< const double > weights );

// Liveness total for a share: largest-remainder split of n between the two
// kinds, ties to liveness.
[[nodiscard]] std::size_t liveness_total( std::size_t n_clauses, double liveness_share );

// Equal clause counts per length. The kind totals are fixed first, then each
// kind is spread evenly over the lengths with the remainder going to the
// shortest lengths. Groups come out ordered by (length, liveness < safety).
[[nodiscard]] std::vector< group_spec > group_counts_uniform( std::size_t n_clauses,
                                                              std::span< const std::size_t > lengths,
                                                              double liveness_share );

// Per-length counts by largest-remainder rounding of `weights`, then each
// length split between kinds so that the liveness total is exact.
[[nodiscard]] std::vector< group_spec > group_counts_weighted( std::size_t n_clauses,
                                                               std::span< const std::size_t > lengths,
                                                               std::span< const double > weights,
                                                               double liveness_share );

[[nodiscard]] double poisson_pmf( std::size_t k, double lambda );

[[nodiscard]] std::vector< group_spec > group_counts_poisson( std::size_t n_clauses,
                                                              std::span< const std::size_t > lengths,
                                                              double lambda,
                                                              double liveness_share );

[[nodiscard]] temporal_clause sample_clause( std::size_t length,
                                             clause_kind kind,
                                             std::uint32_t atom_pool_size,
                                             std::span< const atom > required_atoms,
                                             double negation_prob,
                                             random_stream& rng );

[[nodiscard]] formula gen_formula( std::size_t n_clauses,
                                   std::span< const group_spec > groups,
                                   std::uint32_t atom_pool_size,
                                   double negation_prob,
                                   random_stream& rng,
                                   bool coverage = true );

// Subcase labels of a problem in catalogue order.
[[nodiscard]] std::vector< std::string > subcase_labels( problem p, const gen_config& cfg );

[[nodiscard]] std::vector< task > gen_problem( problem p, const gen_config& cfg );

[[nodiscard]] catalogue gen_catalogue( const gen_config& cfg );

[[nodiscard]] std::size_t expected_task_count( problem p, const gen_config& cfg );

// Group structure a task's formulas were generated from; one entry per
// generated model formula (P7 excludes R).
struct task_plan
{
    std::uint32_t atom_pool_size;
    std::vector< group_spec > groups;
    bool coverage;
    std::size_t formulas;
};

[[nodiscard]] task_plan plan_for( problem p, std::string_view subcase, std::size_t n_clauses, const gen_config& cfg );

// Task count reported for the published eight-problem campaign; differs from
// the count this catalogue definition yields.
inline constexpr std::size_t published_task_count = 210;

[[nodiscard]] std::string catalogue_notice( const gen_config& cfg );

} // namespace tcb::gen
