#pragma once

#include "tcb/core.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcb::emit
{

enum class encoding_mode
{
    fol_standard,  // liveness -> exists T, safety -> forall T over p_i(T)
    propositional, // temporal operators erased, p_i nullary
};

enum class target
{
    tptp,
    ladr,
    intohylo,
    canonical,
};

enum class goal_kind
{
    sat_check,
    entailment,
};

// How an entailment reaches the solver.
enum class goal_strategy
{
    direct,            // satisfiability check of the body itself
    native_conjecture, // antecedent as axioms, consequent as conjecture
    refutation,        // satisfiability of the negated implication
};

[[nodiscard]] std::string_view to_string( encoding_mode m );
[[nodiscard]] std::string_view to_string( target t );
[[nodiscard]] std::string_view to_string( goal_kind g );
[[nodiscard]] std::string_view to_string( goal_strategy s );
[[nodiscard]] encoding_mode parse_encoding_mode( std::string_view text );
[[nodiscard]] target parse_target( std::string_view text );
[[nodiscard]] std::string_view extension( target t );

// P7 checks an implication and P8 a square-of-opposition relation; both are
// posed as things to prove. P1-P6 are satisfiability checks.
[[nodiscard]] goal_kind goal_of( const task& t );

struct fol_node
{
    enum class op
    {
        pred,
        negation,
        conjunction,
        disjunction,
        implication,
        exists,
        forall,
    };

    op kind;
    std::uint32_t predicate = 0; // for pred: p<predicate>
    bool timed = false;          // for pred: applied to the time variable
    std::vector< fol_node > args;
};

struct fol_problem
{
    encoding_mode mode;
    goal_kind goal;
    std::vector< fol_node > axioms;
    std::optional< fol_node > conjecture;
};

[[nodiscard]] fol_node translate( const temporal_clause& clause, encoding_mode mode );
[[nodiscard]] fol_node translate( const compound& body, encoding_mode mode );

// Connective-faithful; no clausification. Conjunctions at the top of the
// axiom side are split into separate units, one per clause for leaves.
[[nodiscard]] fol_problem encode_fol( const task& t, encoding_mode mode );

[[nodiscard]] std::string emit_tptp( const fol_problem& problem, std::string_view header = {} );
[[nodiscard]] std::string emit_ladr( const fol_problem& problem, std::string_view header = {} );

// Modal encoding over one relation r1: liveness -> <r1>, safety -> [r1].
[[nodiscard]] std::string emit_intohylo( const compound& body );
[[nodiscard]] std::string emit_intohylo( const task& t );

struct solver_problem
{
    target format;
    encoding_mode mode;
    goal_kind goal;
    goal_strategy strategy;
    std::string text;
};

[[nodiscard]] solver_problem goal_transform( const task& t, target format, encoding_mode mode );

// The body handed to satisfiability-only backends: the body itself for a
// satisfiability check, its refutation form for an entailment.
[[nodiscard]] compound refutation_body( const task& t );

// Canonical interchange (JSON, one object, version 1). Field order:
// format, version, problem, subcase, n_clauses, seed, body. A leaf is
// {"op":"leaf","atom_pool_size":N,"clauses":[{"kind":"L"|"S","lits":[..]}]}
// with literals as signed atom ids; inner nodes are "not" (arg), "and"/"or"
// (args) and "implies" (lhs, rhs).
inline constexpr int canonical_version = 1;

[[nodiscard]] std::string emit_canonical( const task& t );

class canonical_error : public error
{
public:
    enum class kind
    {
        unknown_version,
        malformed,
        invariant_violation,
    };

    canonical_error( kind k, const std::string& what ) : error( what ), _kind{ k } {}

    [[nodiscard]] kind code() const { return _kind; }

private:
    kind _kind;
};

[[nodiscard]] task parse_canonical( std::string_view text );

// "<problem>_<subcase>_<nclauses>_<seed>"
[[nodiscard]] std::string file_stem( const task& t );
[[nodiscard]] std::string file_name( const task& t, target format );

} // namespace tcb::emit
