#pragma once

#include "tcb/core.hpp"

#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <unistd.h>

namespace tcb::test
{

inline temporal_clause clause( clause_kind kind, std::initializer_list< int > lits )
{
    std::vector< literal > out;
    for ( int l : lits )
        out.push_back( { atom( std::uint32_t( l < 0 ? -l : l ) ), l < 0 } );
    return temporal_clause( kind, std::move( out ) );
}

inline temporal_clause live( std::initializer_list< int > lits )
{
    return clause( clause_kind::liveness, lits );
}

inline temporal_clause safe( std::initializer_list< int > lits )
{
    return clause( clause_kind::safety, lits );
}

inline compound leaf( std::uint32_t pool, std::vector< temporal_clause > clauses )
{
    return compound::leaf( formula( std::move( clauses ), pool ) );
}

// Fresh directory under the system temp dir, removed on destruction.
class scratch_dir
{
    std::filesystem::path _path;

public:
    explicit scratch_dir( const std::string& tag )
    {
        std::string pattern = ( std::filesystem::temp_directory_path() / ( "tcb-" + tag + "-XXXXXX" ) ).string();
        if ( !::mkdtemp( pattern.data() ) )
            throw error( "mkdtemp failed" );
        _path = pattern;
    }
    ~scratch_dir()
    {
        std::error_code ec;
        std::filesystem::remove_all( _path, ec );
    }
    scratch_dir( const scratch_dir& ) = delete;
    scratch_dir& operator=( const scratch_dir& ) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return _path; }
    [[nodiscard]] std::filesystem::path operator/( const std::string& name ) const { return _path / name; }
};

} // namespace tcb::test

#include "tcb/rng.hpp"

namespace tcb::test
{

// Random leaf with `clauses` clauses of length 1..max_len over `atoms` atoms.
inline compound random_leaf( random_stream& rng, std::uint32_t atoms, std::size_t clauses, std::size_t max_len )
{
    std::vector< temporal_clause > out;
    for ( std::size_t i = 0; i < clauses; ++i )
    {
        const auto len = 1 + rng.below( std::min< std::uint64_t >( max_len, atoms ) );
        std::vector< std::uint32_t > pool( atoms );
        for ( std::uint32_t a = 0; a < atoms; ++a )
            pool[ a ] = a + 1;
        std::vector< literal > lits;
        for ( std::size_t j = 0; j < len; ++j )
        {
            std::swap( pool[ j ], pool[ j + rng.below( atoms - j ) ] );
            lits.push_back( { atom( pool[ j ] ), rng.bernoulli( 0.5 ) } );
        }
        out.emplace_back( rng.bernoulli( 0.5 ) ? clause_kind::liveness : clause_kind::safety, std::move( lits ) );
    }
    return compound::leaf( formula( std::move( out ), atoms ) );
}

inline compound random_compound( random_stream& rng, std::uint32_t atoms, int depth )
{
    if ( depth == 0 || rng.below( 3 ) == 0 )
        return random_leaf( rng, atoms, 1 + rng.below( 3 ), 3 );
    switch ( rng.below( 4 ) )
    {
    case 0: return compound::negate( random_compound( rng, atoms, depth - 1 ) );
    case 1: return compound::implies( random_compound( rng, atoms, depth - 1 ), random_compound( rng, atoms, depth - 1 ) );
    default:
    {
        std::vector< compound > kids;
        const auto n = 1 + rng.below( 3 );
        for ( std::uint64_t i = 0; i < n; ++i )
            kids.push_back( random_compound( rng, atoms, depth - 1 ) );
        return rng.bernoulli( 0.5 ) ? compound::conj( std::move( kids ) ) : compound::disj( std::move( kids ) );
    }
    }
}

} // namespace tcb::test
