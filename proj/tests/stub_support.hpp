#pragma once

#include "helpers.hpp"
#include "tcb/catalogue_io.hpp"
#include "tcb/harness.hpp"

// Adapters around the stub solver built alongside the tests.
namespace tcb::test
{

inline harness::solver_adapter stub( std::vector< std::string > args )
{
    args.push_back( "{input}" );
    return { "stub",
             STUB_SOLVER_PATH,
             std::move( args ),
             emit::target::tptp,
             { { "THEOREM PROVED", harness::outcome::proved }, { "COMPLETION", harness::outcome::not_proved } },
             { "--print", "stub version 1.0" } };
}

inline harness::limits within( double seconds )
{
    harness::limits lim;
    lim.timeout_s = seconds;
    return lim;
}

inline catalogue tiny_catalogue( std::size_t count )
{
    catalogue cat;
    for ( std::size_t i = 0; i < count; ++i )
        cat.tasks.push_back( { problem::p1, "base", 50 * ( i + 1 ), i + 1, test::leaf( 1, { test::live( { 1 } ) } ) } );
    return cat;
}

inline void touch_inputs( const catalogue& cat, const std::filesystem::path& dir )
{
    for ( const auto& t : cat.tasks )
        for ( auto f : { emit::target::tptp, emit::target::ladr, emit::target::intohylo } )
            write_file( dir / emit::file_name( t, f ), "input\n" );
}

} // namespace tcb::test
