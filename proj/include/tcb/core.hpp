#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tcb
{

class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Atoms are 1-based indices into the atom pool of the owning formula.
class atom
{
    std::uint32_t _id;

public:
    explicit atom( std::uint32_t id ) : _id{ id }
    {
        if ( id == 0 )
            throw error( "atom id must be positive" );
    }

    [[nodiscard]] std::uint32_t id() const { return _id; }

    friend auto operator<=>( atom, atom ) = default;
};

struct literal
{
    atom var;
    bool negated = false;

    friend auto operator<=>( const literal&, const literal& ) = default;

    // Signed DIMACS-style encoding: +id or -id.
    [[nodiscard]] std::int64_t to_signed() const
    {
        return negated ? -std::int64_t( var.id() ) : std::int64_t( var.id() );
    }
};

enum class clause_kind
{
    liveness, // eventually
    safety,   // always
};

[[nodiscard]] std::string_view to_string( clause_kind kind );

class temporal_clause
{
    clause_kind _kind;
    std::vector< literal > _literals;

public:
    // Throws tcb::error on an empty literal list or a repeated atom.
    temporal_clause( clause_kind kind, std::vector< literal > literals );

    [[nodiscard]] clause_kind kind() const { return _kind; }
    [[nodiscard]] std::span< const literal > literals() const { return _literals; }
    [[nodiscard]] std::size_t length() const { return _literals.size(); }

    friend bool operator==( const temporal_clause&, const temporal_clause& ) = default;
};

// A conjunction of temporal clauses over atoms 1..atom_pool_size.
class formula
{
    std::vector< temporal_clause > _clauses;
    std::uint32_t _atom_pool_size;

public:
    formula( std::vector< temporal_clause > clauses, std::uint32_t atom_pool_size );

    [[nodiscard]] std::span< const temporal_clause > clauses() const { return _clauses; }
    [[nodiscard]] std::uint32_t atom_pool_size() const { return _atom_pool_size; }
    [[nodiscard]] std::size_t size() const { return _clauses.size(); }

    friend bool operator==( const formula&, const formula& ) = default;
};

// Immutable boolean combination of formulas. Nodes are shared, so copying is
// cheap and the same leaf may appear several times in one tree.
class compound
{
public:
    enum class op
    {
        leaf,
        negation,
        conjunction,
        disjunction,
        implication,
    };

    static compound leaf( formula f );
    static compound leaf( std::shared_ptr< const formula > f );
    static compound negate( compound child );
    static compound conj( std::vector< compound > children );
    static compound disj( std::vector< compound > children );
    static compound implies( compound lhs, compound rhs );

    [[nodiscard]] op kind() const { return _node->kind; }
    [[nodiscard]] const formula& leaf_formula() const;
    [[nodiscard]] const std::shared_ptr< const formula >& leaf_ptr() const { return _node->leaf; }
    [[nodiscard]] std::span< const compound > children() const { return _node->children; }

    // Structural equality; sharing is not observable.
    friend bool operator==( const compound& lhs, const compound& rhs );

private:
    struct node
    {
        op kind;
        std::shared_ptr< const formula > leaf;
        std::vector< compound > children;
    };

    explicit compound( std::shared_ptr< const node > n ) : _node{ std::move( n ) } {}

    std::shared_ptr< const node > _node;
};

[[nodiscard]] std::string_view to_string( compound::op kind );

enum class problem
{
    p1 = 1, p2, p3, p4, p5, p6, p7, p8
};

inline constexpr std::size_t problem_count = 8;

[[nodiscard]] std::string to_string( problem p );
[[nodiscard]] problem parse_problem( std::string_view text );
[[nodiscard]] std::vector< problem > all_problems();

struct task
{
    problem prob;
    std::string subcase;
    std::size_t n_clauses;
    std::uint64_t seed;
    compound body;

    // "<problem>_<subcase>_<nclauses>", e.g. "P6_a90-10_100".
    [[nodiscard]] std::string id() const;

    friend bool operator==( const task&, const task& ) = default;
};

struct task_key
{
    problem prob;
    std::string subcase;
    std::size_t n_clauses;
};

// Inverse of task::id().
[[nodiscard]] task_key parse_task_id( std::string_view id );

struct catalogue
{
    std::vector< task > tasks;
    std::string config_digest;
};

// Set of atoms occurring in any leaf, ascending by id.
[[nodiscard]] std::set< atom > atoms_of( const compound& body );
[[nodiscard]] std::set< atom > atoms_of( const formula& f );

struct kind_counts
{
    std::size_t liveness = 0;
    std::size_t safety = 0;

    friend bool operator==( const kind_counts&, const kind_counts& ) = default;
};

[[nodiscard]] std::map< std::size_t, kind_counts > clause_length_histogram( const formula& f );

// Visits every leaf occurrence in depth-first, left-to-right order.
template < typename F >
void for_each_leaf( const compound& body, F&& fn )
{
    if ( body.kind() == compound::op::leaf )
    {
        fn( body.leaf_formula() );
        return;
    }
    for ( const auto& child : body.children() )
        for_each_leaf( child, fn );
}

// Lowercase hex SHA-256 of the given bytes.
[[nodiscard]] std::string sha256_hex( std::string_view bytes );

} // namespace tcb
