#include "tcb/oracle.hpp"

#include <algorithm>
#include <bit>

#include <fmt/core.h>

namespace tcb::oracle
{

namespace
{

bool literal_holds( const literal& lit, const assignment& a )
{
    const auto it = a.find( lit.var.id() );
    const bool value = it != a.end() && it->second;
    return value != lit.negated;
}

bool clause_holds( const temporal_clause& clause, const assignment& a )
{
    return std::ranges::any_of( clause.literals(), [ & ]( const literal& l ) { return literal_holds( l, a ); } );
}

template < typename Leaf >
bool evaluate( const compound& body, const Leaf& leaf )
{
    const auto kids = body.children();
    switch ( body.kind() )
    {
    case compound::op::leaf: return leaf( body.leaf_formula() );
    case compound::op::negation: return !evaluate( kids[ 0 ], leaf );
    case compound::op::conjunction:
        return std::ranges::all_of( kids, [ & ]( const compound& c ) { return evaluate( c, leaf ); } );
    case compound::op::disjunction:
        return std::ranges::any_of( kids, [ & ]( const compound& c ) { return evaluate( c, leaf ); } );
    case compound::op::implication: return !evaluate( kids[ 0 ], leaf ) || evaluate( kids[ 1 ], leaf );
    }
    return false;
}

// Clause over compressed atom indices: bit i of a state is the i-th atom.
struct mask_clause
{
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
    clause_kind kind = clause_kind::liveness;

    [[nodiscard]] bool holds( std::uint32_t s ) const { return ( s & pos ) != 0 || ( ~s & neg ) != 0; }
    // Every literal false.
    [[nodiscard]] bool refuted( std::uint32_t s ) const { return ( s & pos ) == 0 && ( ~s & neg ) == 0; }

    friend auto operator<=>( const mask_clause&, const mask_clause& ) = default;
};

class atom_index
{
    std::vector< std::uint32_t > _ids;

public:
    explicit atom_index( const compound& body )
    {
        for ( auto a : atoms_of( body ) )
            _ids.push_back( a.id() );
    }

    [[nodiscard]] std::size_t size() const { return _ids.size(); }

    [[nodiscard]] mask_clause compile( const temporal_clause& clause ) const
    {
        mask_clause out;
        out.kind = clause.kind();
        for ( const auto& lit : clause.literals() )
        {
            const auto bit = std::uint32_t( 1 ) << index_of( lit.var.id() );
            ( lit.negated ? out.neg : out.pos ) |= bit;
        }
        return out;
    }

    [[nodiscard]] assignment decode( std::uint32_t s ) const
    {
        assignment a;
        for ( std::size_t i = 0; i < _ids.size(); ++i )
            a[ _ids[ i ] ] = ( s >> i ) & 1U;
        return a;
    }

private:
    [[nodiscard]] std::size_t index_of( std::uint32_t id ) const
    {
        return std::size_t( std::lower_bound( _ids.begin(), _ids.end(), id ) - _ids.begin() );
    }
};

// Boolean skeleton whose leaves are distinct temporal clauses.
struct skeleton
{
    struct node
    {
        compound::op kind;
        std::size_t clause = 0; // for leaves: index into clauses
        std::vector< node > kids;
    };

    std::vector< mask_clause > clauses;
    node root;

    skeleton( const compound& body, const atom_index& idx ) : root{ build( body, idx ) } {}

    template < typename Value >
    [[nodiscard]] bool eval( const node& n, const Value& value ) const
    {
        switch ( n.kind )
        {
        case compound::op::leaf: return value( n.clause );
        case compound::op::negation: return !eval( n.kids[ 0 ], value );
        case compound::op::conjunction:
            return std::ranges::all_of( n.kids, [ & ]( const node& k ) { return eval( k, value ); } );
        case compound::op::disjunction:
            return std::ranges::any_of( n.kids, [ & ]( const node& k ) { return eval( k, value ); } );
        case compound::op::implication: return !eval( n.kids[ 0 ], value ) || eval( n.kids[ 1 ], value );
        }
        return false;
    }

private:
    std::size_t intern( const mask_clause& c )
    {
        const auto it = std::find( clauses.begin(), clauses.end(), c );
        if ( it != clauses.end() )
            return std::size_t( it - clauses.begin() );
        clauses.push_back( c );
        return clauses.size() - 1;
    }

    node build( const compound& body, const atom_index& idx )
    {
        if ( body.kind() == compound::op::leaf )
        {
            node conj{ compound::op::conjunction, 0, {} };
            for ( const auto& clause : body.leaf_formula().clauses() )
                conj.kids.push_back( { compound::op::leaf, intern( idx.compile( clause ) ), {} } );
            return conj;
        }
        node n{ body.kind(), 0, {} };
        for ( const auto& child : body.children() )
            n.kids.push_back( build( child, idx ) );
        return n;
    }
};

// Rewrites the body as a flat conjunction of temporal clauses when that is
// possible by equivalences alone.
bool flatten( const compound& n, bool negated, const atom_index& idx, std::vector< mask_clause >& out )
{
    const auto kids = n.children();
    if ( !negated )
    {
        switch ( n.kind() )
        {
        case compound::op::leaf:
            for ( const auto& clause : n.leaf_formula().clauses() )
                out.push_back( idx.compile( clause ) );
            return true;
        case compound::op::conjunction:
            return std::ranges::all_of( kids, [ & ]( const compound& c ) { return flatten( c, false, idx, out ); } );
        case compound::op::negation: return flatten( kids[ 0 ], true, idx, out );
        case compound::op::disjunction: return kids.size() == 1 && flatten( kids[ 0 ], false, idx, out );
        case compound::op::implication: return false;
        }
        return false;
    }

    switch ( n.kind() )
    {
    case compound::op::negation: return flatten( kids[ 0 ], false, idx, out );
    case compound::op::disjunction:
        return std::ranges::all_of( kids, [ & ]( const compound& c ) { return flatten( c, true, idx, out ); } );
    case compound::op::implication: return flatten( kids[ 0 ], false, idx, out ) && flatten( kids[ 1 ], true, idx, out );
    case compound::op::conjunction: return kids.size() == 1 && flatten( kids[ 0 ], true, idx, out );
    case compound::op::leaf:
    {
        const auto clauses = n.leaf_formula().clauses();
        if ( clauses.size() != 1 )
            return false;
        const auto& clause = clauses[ 0 ];
        // not <>(l1 | .. | lk) == [](~l1) & .. & [](~lk); not [](l) == <>(~l)
        if ( clause.kind() == clause_kind::safety && clause.length() != 1 )
            return false;
        const auto flipped = clause.kind() == clause_kind::liveness ? clause_kind::safety : clause_kind::liveness;
        for ( const auto& lit : clause.literals() )
        {
            const literal neg{ lit.var, !lit.negated };
            out.push_back( idx.compile( temporal_clause{ flipped, { neg } } ) );
        }
        return true;
    }
    }
    return false;
}

// A witness obligation: some state must satisfy the clause, or refute it.
struct obligation
{
    mask_clause clause;
    bool refute;

    [[nodiscard]] bool met_by( std::uint32_t s ) const { return refute ? clause.refuted( s ) : clause.holds( s ); }
};

class state_set
{
    std::vector< std::uint64_t > _words;

public:
    explicit state_set( std::size_t universe ) : _words( ( universe + 63 ) / 64, 0 ) {}

    void insert( std::uint32_t s ) { _words[ s / 64 ] |= std::uint64_t( 1 ) << ( s % 64 ); }

    [[nodiscard]] bool empty() const
    {
        return std::ranges::all_of( _words, []( std::uint64_t w ) { return w == 0; } );
    }

    [[nodiscard]] std::uint32_t first() const
    {
        for ( std::size_t i = 0; i < _words.size(); ++i )
            if ( _words[ i ] )
                return std::uint32_t( i * 64 + std::size_t( std::countr_zero( _words[ i ] ) ) );
        return 0;
    }

    [[nodiscard]] state_set intersect( const state_set& other ) const
    {
        state_set out = *this;
        for ( std::size_t i = 0; i < _words.size(); ++i )
            out._words[ i ] &= other._words[ i ];
        return out;
    }
};

// Finds at most `limit` states, each satisfying every global constraint,
// that jointly discharge all obligations. Returns the fewest states found.
class packer
{
    std::vector< state_set > _candidates;
    state_set _global;
    std::vector< state_set > _groups;

public:
    packer( std::size_t n_atoms,
            std::span< const mask_clause > always,
            std::span< const mask_clause > never,
            std::span< const obligation > obligations )
            : _global( std::size_t( 1 ) << n_atoms )
    {
        const auto universe = std::uint32_t( 1 ) << n_atoms;
        std::vector< std::uint32_t > allowed;
        for ( std::uint32_t s = 0; s < universe; ++s )
        {
            const bool ok = std::ranges::all_of( always, [ & ]( const mask_clause& c ) { return c.holds( s ); } )
                            && std::ranges::all_of( never, [ & ]( const mask_clause& c ) { return c.refuted( s ); } );
            if ( ok )
            {
                _global.insert( s );
                allowed.push_back( s );
            }
        }
        for ( const auto& ob : obligations )
        {
            state_set set( universe );
            for ( auto s : allowed )
                if ( ob.met_by( s ) )
                    set.insert( s );
            _candidates.push_back( std::move( set ) );
        }
    }

    std::optional< std::vector< std::uint32_t > > solve( std::size_t limit )
    {
        if ( _global.empty() )
            return std::nullopt;
        for ( const auto& c : _candidates )
            if ( c.empty() )
                return std::nullopt;
        if ( _candidates.empty() )
            return std::vector< std::uint32_t >{ _global.first() };

        for ( std::size_t k = 1; k <= limit; ++k )
        {
            _groups.clear();
            if ( place( 0, k ) )
            {
                std::vector< std::uint32_t > states;
                for ( const auto& g : _groups )
                    states.push_back( g.first() );
                return states;
            }
        }
        return std::nullopt;
    }

private:
    bool place( std::size_t i, std::size_t k )
    {
        if ( i == _candidates.size() )
            return true;
        for ( std::size_t g = 0; g < _groups.size(); ++g )
        {
            auto merged = _groups[ g ].intersect( _candidates[ i ] );
            if ( merged.empty() )
                continue;
            std::swap( _groups[ g ], merged );
            if ( place( i + 1, k ) )
                return true;
            std::swap( _groups[ g ], merged );
        }
        if ( _groups.size() < k )
        {
            _groups.push_back( _candidates[ i ] );
            if ( place( i + 1, k ) )
                return true;
            _groups.pop_back();
        }
        return false;
    }
};

lasso_trace make_trace( const atom_index& idx, std::span< const std::uint32_t > states )
{
    lasso_trace t;
    for ( auto s : states )
        t.states.push_back( idx.decode( s ) );
    t.loop_start = 0;
    return t;
}

void check_bounds( const atom_index& idx, std::size_t max_states )
{
    if ( idx.size() > max_temporal_atoms )
        throw error( fmt::format( "bounded search supports at most {} atoms, body has {}", max_temporal_atoms,
                                  idx.size() ) );
    if ( max_states == 0 || max_states > max_trace_states )
        throw error( fmt::format( "max_states must lie in 1..{}, got {}", max_trace_states, max_states ) );
}

} // namespace

bool evaluate_prop( const compound& body, const assignment& a )
{
    return evaluate( body, [ & ]( const formula& f ) {
        return std::ranges::all_of( f.clauses(), [ & ]( const temporal_clause& c ) { return clause_holds( c, a ); } );
    } );
}

bool evaluate_trace( const compound& body, const lasso_trace& trace )
{
    if ( trace.states.empty() || trace.loop_start >= trace.states.size() )
        throw error( "malformed lasso trace" );
    return evaluate( body, [ & ]( const formula& f ) {
        return std::ranges::all_of( f.clauses(), [ & ]( const temporal_clause& c ) {
            auto at = [ & ]( const assignment& s ) { return clause_holds( c, s ); };
            return c.kind() == clause_kind::liveness ? std::ranges::any_of( trace.states, at )
                                                     : std::ranges::all_of( trace.states, at );
        } );
    } );
}

prop_result brute_force_prop_sat( const compound& body )
{
    const atom_index idx( body );
    if ( idx.size() > max_prop_atoms )
        throw error( fmt::format( "propositional enumeration supports at most {} atoms, body has {}", max_prop_atoms,
                                  idx.size() ) );
    const skeleton sk( body, idx );
    const auto universe = std::uint64_t( 1 ) << idx.size();
    for ( std::uint64_t s = 0; s < universe; ++s )
    {
        const auto state = std::uint32_t( s );
        if ( sk.eval( sk.root, [ & ]( std::size_t c ) { return sk.clauses[ c ].holds( state ); } ) )
            return { true, idx.decode( state ) };
    }
    return { false, {} };
}

temporal_result bounded_temporal_sat( const compound& body, std::size_t max_states )
{
    const atom_index idx( body );
    check_bounds( idx, max_states );

    std::vector< mask_clause > flat;
    if ( flatten( body, false, idx, flat ) )
    {
        std::vector< mask_clause > always;
        std::vector< obligation > obligations;
        std::size_t liveness = 0;
        for ( const auto& c : flat )
        {
            if ( c.kind == clause_kind::safety )
                always.push_back( c );
            else
            {
                obligations.push_back( { c, false } );
                ++liveness;
            }
        }
        packer p( idx.size(), always, {}, obligations );
        if ( auto states = p.solve( max_states ) )
            return { temporal_verdict::sat, make_trace( idx, *states ) };
        if ( max_states >= liveness + 1 )
            return { temporal_verdict::unsat_proved, std::nullopt };
        return { temporal_verdict::unknown_up_to_bound, std::nullopt };
    }

    const skeleton sk( body, idx );
    if ( sk.clauses.size() > max_skeleton_clauses )
        throw error( fmt::format( "bounded search supports at most {} distinct clauses in a compound body, got {}",
                                  max_skeleton_clauses, sk.clauses.size() ) );

    std::optional< std::vector< std::uint32_t > > best;
    const auto combos = std::uint64_t( 1 ) << sk.clauses.size();
    for ( std::uint64_t v = 0; v < combos; ++v )
    {
        const auto value = [ & ]( std::size_t c ) { return ( ( v >> c ) & 1U ) != 0; };
        if ( !sk.eval( sk.root, value ) )
            continue;

        std::vector< mask_clause > always;
        std::vector< mask_clause > never;
        std::vector< obligation > obligations;
        for ( std::size_t c = 0; c < sk.clauses.size(); ++c )
        {
            const auto& clause = sk.clauses[ c ];
            const bool live = clause.kind == clause_kind::liveness;
            if ( value( c ) )
                live ? obligations.push_back( { clause, false } ) : always.push_back( clause );
            else
                live ? never.push_back( clause ) : obligations.push_back( { clause, true } );
        }
        const auto limit = best ? best->size() - 1 : max_states;
        if ( limit == 0 )
            break;
        packer p( idx.size(), always, never, obligations );
        if ( auto states = p.solve( limit ) )
            best = std::move( states );
        if ( best && best->size() == 1 )
            break;
    }
    if ( best )
        return { temporal_verdict::sat, make_trace( idx, *best ) };
    return { temporal_verdict::unknown_up_to_bound, std::nullopt };
}

entailment_result check_entailment_small( const compound& g, const temporal_clause& r, std::size_t max_states )
{
    std::uint32_t pool = 1;
    for ( const auto& lit : r.literals() )
        pool = std::max( pool, lit.var.id() );
    const auto query = compound::conj( { g, compound::negate( compound::leaf( formula{ { r }, pool } ) ) } );

    auto result = bounded_temporal_sat( query, max_states );
    switch ( result.verdict )
    {
    case temporal_verdict::sat: return { entailment_verdict::not_entailed, std::move( result.trace ) };
    case temporal_verdict::unsat_proved: return { entailment_verdict::entailed, std::nullopt };
    case temporal_verdict::unknown_up_to_bound: break;
    }
    return { entailment_verdict::bound_not_decisive, std::nullopt };
}

} // namespace tcb::oracle
