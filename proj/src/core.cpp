#include "tcb/core.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/core.h>

namespace tcb
{

std::string_view to_string( clause_kind kind )
{
    return kind == clause_kind::liveness ? "liveness" : "safety";
}

temporal_clause::temporal_clause( clause_kind kind, std::vector< literal > literals )
        : _kind{ kind }, _literals{ std::move( literals ) }
{
    if ( _literals.empty() )
        throw error( "temporal clause must contain at least one literal" );

    std::vector< std::uint32_t > ids;
    ids.reserve( _literals.size() );
    for ( const auto& lit : _literals )
        ids.push_back( lit.var.id() );
    std::sort( ids.begin(), ids.end() );
    if ( std::adjacent_find( ids.begin(), ids.end() ) != ids.end() )
        throw error( "temporal clause repeats an atom" );
}

formula::formula( std::vector< temporal_clause > clauses, std::uint32_t atom_pool_size )
        : _clauses{ std::move( clauses ) }, _atom_pool_size{ atom_pool_size }
{
    if ( _atom_pool_size == 0 )
        throw error( "atom pool size must be positive" );
    for ( const auto& clause : _clauses )
        for ( const auto& lit : clause.literals() )
            if ( lit.var.id() > _atom_pool_size )
                throw error( fmt::format( "atom {} exceeds pool size {}", lit.var.id(), _atom_pool_size ) );
}

compound compound::leaf( formula f )
{
    return leaf( std::make_shared< const formula >( std::move( f ) ) );
}

compound compound::leaf( std::shared_ptr< const formula > f )
{
    if ( !f )
        throw error( "leaf formula must not be null" );
    return compound{ std::make_shared< const node >( node{ op::leaf, std::move( f ), {} } ) };
}

compound compound::negate( compound child )
{
    return compound{ std::make_shared< const node >( node{ op::negation, nullptr, { std::move( child ) } } ) };
}

compound compound::conj( std::vector< compound > children )
{
    if ( children.empty() )
        throw error( "conjunction needs at least one operand" );
    return compound{ std::make_shared< const node >( node{ op::conjunction, nullptr, std::move( children ) } ) };
}

compound compound::disj( std::vector< compound > children )
{
    if ( children.empty() )
        throw error( "disjunction needs at least one operand" );
    return compound{ std::make_shared< const node >( node{ op::disjunction, nullptr, std::move( children ) } ) };
}

compound compound::implies( compound lhs, compound rhs )
{
    return compound{ std::make_shared< const node >(
            node{ op::implication, nullptr, { std::move( lhs ), std::move( rhs ) } } ) };
}

const formula& compound::leaf_formula() const
{
    if ( _node->kind != op::leaf )
        throw error( "not a leaf node" );
    return *_node->leaf;
}

bool operator==( const compound& lhs, const compound& rhs )
{
    if ( lhs._node == rhs._node )
        return true;
    if ( lhs.kind() != rhs.kind() )
        return false;
    if ( lhs.kind() == compound::op::leaf )
        return *lhs._node->leaf == *rhs._node->leaf;
    return std::ranges::equal( lhs.children(), rhs.children() );
}

std::string_view to_string( compound::op kind )
{
    switch ( kind )
    {
    case compound::op::leaf: return "leaf";
    case compound::op::negation: return "not";
    case compound::op::conjunction: return "and";
    case compound::op::disjunction: return "or";
    case compound::op::implication: return "implies";
    }
    return "?";
}

std::string to_string( problem p )
{
    return fmt::format( "P{}", static_cast< int >( p ) );
}

problem parse_problem( std::string_view text )
{
    if ( text.size() == 2 && ( text[ 0 ] == 'P' || text[ 0 ] == 'p' ) && text[ 1 ] >= '1' && text[ 1 ] <= '8' )
        return static_cast< problem >( text[ 1 ] - '0' );
    throw error( fmt::format( "unknown problem id '{}'", text ) );
}

std::vector< problem > all_problems()
{
    std::vector< problem > out;
    for ( int i = 1; i <= int( problem_count ); ++i )
        out.push_back( static_cast< problem >( i ) );
    return out;
}

std::string task::id() const
{
    return fmt::format( "{}_{}_{}", to_string( prob ), subcase, n_clauses );
}

task_key parse_task_id( std::string_view id )
{
    const auto first = id.find( '_' );
    const auto last = id.rfind( '_' );
    if ( first == std::string_view::npos || first == last )
        throw error( fmt::format( "malformed task id '{}'", id ) );

    task_key key{ parse_problem( id.substr( 0, first ) ), std::string( id.substr( first + 1, last - first - 1 ) ), 0 };
    const auto digits = id.substr( last + 1 );
    const auto [ ptr, ec ] = std::from_chars( digits.data(), digits.data() + digits.size(), key.n_clauses );
    if ( ec != std::errc{} || ptr != digits.data() + digits.size() || key.subcase.empty() )
        throw error( fmt::format( "malformed task id '{}'", id ) );
    return key;
}

std::set< atom > atoms_of( const formula& f )
{
    std::set< atom > out;
    for ( const auto& clause : f.clauses() )
        for ( const auto& lit : clause.literals() )
            out.insert( lit.var );
    return out;
}

std::set< atom > atoms_of( const compound& body )
{
    std::set< atom > out;
    for_each_leaf( body, [ & ]( const formula& f ) { out.merge( atoms_of( f ) ); } );
    return out;
}

std::map< std::size_t, kind_counts > clause_length_histogram( const formula& f )
{
    std::map< std::size_t, kind_counts > hist;
    for ( const auto& clause : f.clauses() )
    {
        auto& slot = hist[ clause.length() ];
        if ( clause.kind() == clause_kind::liveness )
            ++slot.liveness;
        else
            ++slot.safety;
    }
    return hist;
}

} // namespace tcb
