#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace tcb;
using namespace tcb::test;

TEST( Core, AtomIdZeroIsRejected )
{
    EXPECT_THROW( atom( 0 ), error );
    EXPECT_EQ( atom( 7 ).id(), 7u );
}

TEST( Core, ClauseNeedsDistinctAtomsAndAtLeastOneLiteral )
{
    EXPECT_THROW( temporal_clause( clause_kind::safety, {} ), error );
    EXPECT_THROW( live( { 1, -1 } ), error );
    EXPECT_THROW( live( { 2, 3, 2 } ), error );
    const auto c = live( { 1, -2 } );
    EXPECT_EQ( c.length(), 2u );
    EXPECT_EQ( c.literals()[ 1 ].to_signed(), -2 );
}

TEST( Core, FormulaRejectsAtomsOutsideThePool )
{
    EXPECT_THROW( formula( { live( { 1, 4 } ) }, 3 ), error );
    EXPECT_NO_THROW( formula( { live( { 1, 3 } ) }, 3 ) );
}

TEST( Core, AtomsOfCollectsTheUnionOverLeaves )
{
    const auto f = leaf( 5, { live( { 1, 2 } ), safe( { -5 } ) } );
    EXPECT_EQ( atoms_of( f ), ( std::set< atom >{ atom( 1 ), atom( 2 ), atom( 5 ) } ) );

    const auto one = leaf( 1, { safe( { 1 } ) } );
    EXPECT_EQ( atoms_of( compound::implies( one, one ) ), ( std::set< atom >{ atom( 1 ) } ) );

    const auto both = compound::conj( { leaf( 3, { live( { 1, 2 } ) } ), leaf( 3, { safe( { 2, 3 } ) } ) } );
    EXPECT_EQ( atoms_of( both ), ( std::set< atom >{ atom( 1 ), atom( 2 ), atom( 3 ) } ) );
}

TEST( Core, HistogramPartitionsTheClauses )
{
    const formula f( { live( { 1, 2 } ), live( { 2, 3 } ), safe( { 1, 2, 3 } ), safe( { -1, 2, -3 } ) }, 3 );
    const auto h = clause_length_histogram( f );
    ASSERT_EQ( h.size(), 2u );
    EXPECT_EQ( h.at( 2 ), ( kind_counts{ 2, 0 } ) );
    EXPECT_EQ( h.at( 3 ), ( kind_counts{ 0, 2 } ) );
}

TEST( Core, CompoundEqualityIsStructural )
{
    const auto a = leaf( 2, { live( { 1 } ) } );
    const auto b = leaf( 2, { live( { 1 } ) } );
    const auto c = leaf( 2, { live( { -1 } ) } );
    EXPECT_EQ( a, b );
    EXPECT_NE( a, c );
    EXPECT_EQ( compound::negate( a ), compound::negate( b ) );
    EXPECT_NE( compound::conj( { a, c } ), compound::disj( { a, c } ) );
    EXPECT_NE( compound::implies( a, c ), compound::implies( c, a ) );
}

TEST( Core, ProblemNamesRoundTrip )
{
    for ( auto p : all_problems() )
        EXPECT_EQ( parse_problem( to_string( p ) ), p );
    EXPECT_THROW( (void) parse_problem( "P9" ), error );
    EXPECT_EQ( all_problems().size(), problem_count );
}

TEST( Core, TaskIdParsesBack )
{
    const task t{ problem::p6, "a90-10", 100, 42, leaf( 1, { live( { 1 } ) } ) };
    EXPECT_EQ( t.id(), "P6_a90-10_100" );
    const auto key = parse_task_id( t.id() );
    EXPECT_EQ( key.prob, problem::p6 );
    EXPECT_EQ( key.subcase, "a90-10" );
    EXPECT_EQ( key.n_clauses, 100u );
    EXPECT_THROW( (void) parse_task_id( "P6_a90-10" ), error );
    EXPECT_THROW( (void) parse_task_id( "P6_x_ten" ), error );
}

TEST( Core, Sha256KnownVectors )
{
    EXPECT_EQ( sha256_hex( "" ), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855" );
    EXPECT_EQ( sha256_hex( "abc" ), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad" );
}
