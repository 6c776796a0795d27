#include "helpers.hpp"
#include "tcb/analysis.hpp"
#include "tcb/catalogue_io.hpp"
#include "table1_fixture.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <fmt/core.h>

using namespace tcb;
using namespace tcb::analysis;
using harness::outcome;
using harness::run_record;
using tcb::test::scratch_dir;

namespace
{

run_record rec( std::string task, std::string solver, int attempt, outcome o, double t, std::uint64_t mem = 1000 )
{
    run_record r;
    r.task_id = std::move( task );
    r.solver = std::move( solver );
    r.attempt = attempt;
    r.result = o;
    r.wall_time_s = t;
    r.peak_mem_bytes = mem;
    r.encoding = "fol";
    return r;
}

} // namespace

TEST( Aggregate, PlainMean )
{
    const auto a = aggregate( { rec( "P1_base_50", "s", 1, outcome::sat, 0.01 ), rec( "P1_base_50", "s", 2, outcome::sat, 0.02 ),
                                rec( "P1_base_50", "s", 3, outcome::sat, 0.03 ) } );
    ASSERT_EQ( a.size(), 1u );
    EXPECT_NEAR( *a[ 0 ].mean_time_s, 0.02, 1e-15 );
    EXPECT_EQ( a[ 0 ].consensus, outcome::sat );
    EXPECT_FALSE( a[ 0 ].anomaly );
    EXPECT_EQ( a[ 0 ].attempts, 3 );
    EXPECT_EQ( a[ 0 ].exclusions, 0 );
}

TEST( Aggregate, TimeoutIsExcludedAndFlagged )
{
    const auto a = aggregate( { rec( "P1_base_50", "s", 1, outcome::proved, 0.1 ),
                                rec( "P1_base_50", "s", 2, outcome::timeout, 300.4 ),
                                rec( "P1_base_50", "s", 3, outcome::proved, 0.3 ) } );
    ASSERT_EQ( a.size(), 1u );
    EXPECT_NEAR( *a[ 0 ].mean_time_s, 0.2, 1e-15 );
    EXPECT_TRUE( a[ 0 ].anomaly );
    EXPECT_EQ( a[ 0 ].exclusions, 1 );
    EXPECT_FALSE( a[ 0 ].consensus );
}

TEST( Aggregate, SingleAttemptIsIdentity )
{
    const auto a = aggregate( { rec( "P2_base_100", "s", 1, outcome::unsat, 0.7, 5000 ) } );
    EXPECT_EQ( *a[ 0 ].mean_time_s, 0.7 );
    EXPECT_EQ( *a[ 0 ].mean_mem_bytes, 5000.0 );
}

TEST( Aggregate, AllTimeoutsLeaveNoMean )
{
    const auto a = aggregate( { rec( "P1_base_2000", "p", 1, outcome::timeout, 300.2 ),
                                rec( "P1_base_2000", "p", 2, outcome::timeout, 300.3 ) } );
    EXPECT_FALSE( a[ 0 ].mean_time_s );
    EXPECT_EQ( a[ 0 ].consensus, outcome::timeout );
    EXPECT_EQ( a[ 0 ].exclusions, 2 );
}

TEST( Aggregate, OracleRecordsAreIgnored )
{
    auto o = rec( "P1_base_50", "oracle", 1, outcome::sat, 0.0 );
    o.source = "oracle";
    EXPECT_TRUE( aggregate( { o } ).empty() );
}

TEST( Aggregate, PermutationInvariant )
{
    std::vector< run_record > records;
    std::mt19937 gen( 1 );
    std::uniform_real_distribution< double > t( 0.0, 3.0 );
    for ( const auto* task : { "P1_base_50", "P1_base_100", "P3_m2_50", "P6_a90-10_200", "P6_b10-90_50" } )
        for ( const auto* s : { "prover9", "spass", "inkresat" } )
            for ( int k = 1; k <= 3; ++k )
                records.push_back( rec( task, s, k, k == 2 && s[ 0 ] == 'p' ? outcome::timeout : outcome::sat, t( gen ),
                                        std::uint64_t( t( gen ) * 1e6 ) ) );
    const auto reference = aggregate( records );
    for ( int i = 0; i < 20; ++i )
    {
        std::shuffle( records.begin(), records.end(), gen );
        EXPECT_EQ( aggregate( records ), reference );
    }
    EXPECT_EQ( reference.size(), 15u );
    EXPECT_EQ( reference.front().task_id, "P1_base_50" );
    EXPECT_EQ( reference.back().task_id, "P6_b10-90_50" );
}

TEST( SummaryTable, TableOneSelectiveAverages )
{
    const auto aggs = test::table1_aggregates();
    std::vector< table_row > rows;
    for ( auto p : { problem::p1, problem::p2, problem::p3, problem::p4, problem::p5, problem::p6 } )
        for ( const auto* s : { "prover9", "spass" } )
            rows.push_back( { p, s } );
    const auto table = summary_table_of( aggs, rows, { 50, 100, 200, 500 },
                                         average_rule::selective( { { 100, { "prover9" } }, { 200, { "spass" } } } ) );
    EXPECT_FALSE( table.averages[ 0 ] );
    EXPECT_NEAR( *table.averages[ 1 ], 0.0787, 1e-4 );
    EXPECT_NEAR( *table.averages[ 2 ], 0.3622, 1e-4 );
    EXPECT_FALSE( table.averages[ 3 ] );
    EXPECT_DOUBLE_EQ( *table.cells[ 0 ][ 3 ], 4.6767 );
}

TEST( SummaryTable, TableOneInKreSatPlainMeans )
{
    const auto aggs = test::table1_aggregates();
    std::vector< table_row > rows;
    for ( auto p : { problem::p1, problem::p2, problem::p3, problem::p4, problem::p5, problem::p6 } )
        rows.push_back( { p, "inkresat" } );
    const auto table = summary_table_of( aggs, rows, { 100, 200 }, average_rule::all_rows() );
    EXPECT_NEAR( *table.averages[ 0 ], 0.000648, 1e-4 );
    EXPECT_NEAR( *table.averages[ 1 ], 0.002997, 1e-4 );
    // The printed values are the rounded means; they hold much tighter too.
    EXPECT_NEAR( *table.averages[ 0 ], 0.000648, 1e-6 );
    EXPECT_NEAR( *table.averages[ 1 ], 0.002997, 1e-6 );
}

TEST( SummaryTable, SingleCellAndGaps )
{
    const auto aggs = test::table1_aggregates();
    const auto one = summary_table_of( aggs, { { problem::p4, "spass" } }, { 500 }, average_rule::all_rows() );
    EXPECT_DOUBLE_EQ( *one.averages[ 0 ], 0.2233 );

    const auto gap = summary_table_of( aggs, { { problem::p7, "spass" } }, { 50 }, average_rule::all_rows() );
    EXPECT_FALSE( gap.cells[ 0 ][ 0 ] );
    EXPECT_FALSE( gap.averages[ 0 ] );
    EXPECT_EQ( to_csv( gap ), "problem,solver,50\nP7,spass,\naverage,,\n" );
}

TEST( Csv, EmptyIsHeaderOnly )
{
    EXPECT_EQ( to_csv( std::vector< aggregate_record >{} ), std::string( csv_header ) + "\n" );
}

TEST( Csv, RowsAndDeterminism )
{
    const auto aggs = aggregate( { rec( "P1_base_100", "spass", 1, outcome::sat, 0.25, 2048 ),
                                   rec( "P1_base_50", "spass", 1, outcome::sat, 0.5, 1024 ),
                                   rec( "P1_base_50", "prover9", 1, outcome::timeout, 300.1 ) } );
    const auto csv = to_csv( aggs );
    EXPECT_EQ( csv, std::string( csv_header ) + "\n"
                            "P1,base,50,prover9,fol,,,TIMEOUT,0,1,1,P1_base_50\n"
                            "P1,base,50,spass,fol,0.5,1024,SAT,0,0,1,P1_base_50\n"
                            "P1,base,100,spass,fol,0.25,2048,SAT,0,0,1,P1_base_100\n" );
    scratch_dir dir( "csv" );
    export_csv( aggs, dir / "a.csv" );
    export_csv( aggs, dir / "b.csv" );
    EXPECT_EQ( read_file( dir / "a.csv" ), read_file( dir / "b.csv" ) );
    EXPECT_THROW( export_csv( aggs, dir / "missing" / "x.csv" ), error );
}

TEST( Csv, DistinctAggregatesGiveDistinctRows )
{
    std::vector< aggregate_record > aggs;
    for ( int attempts = 1; attempts <= 3; ++attempts )
        for ( bool anomaly : { false, true } )
        {
            aggregate_record a;
            a.task_id = "P1_base_50";
            a.solver = "s";
            a.encoding = "fol";
            a.mean_time_s = 0.1;
            a.attempts = attempts;
            a.anomaly = anomaly;
            aggs.push_back( a );
        }
    const auto csv = to_csv( aggs );
    std::set< std::string > rows;
    std::size_t lines = 0;
    for ( std::size_t pos = csv.find( '\n' ) + 1; pos < csv.size(); pos = csv.find( '\n', pos ) + 1, ++lines )
        rows.insert( csv.substr( pos, csv.find( '\n', pos ) - pos ) );
    EXPECT_EQ( rows.size(), aggs.size() );
    EXPECT_EQ( lines, aggs.size() );
}

TEST( Numbers, ShortestRoundTrip )
{
    EXPECT_EQ( format_number( 0.1 ), "0.1" );
    EXPECT_EQ( format_number( 1e-7 ), "1e-07" );
    EXPECT_EQ( format_number( 300 ), "300" );
    EXPECT_EQ( std::stod( format_number( 0.07873333333333334 ) ), 0.07873333333333334 );
}

TEST( Series, FirstProblemHasOneSeriesPerSolver )
{
    std::vector< run_record > records;
    for ( auto n : { 50, 100, 200, 500, 1000, 2000 } )
        for ( const auto* s : { "prover9", "spass", "inkresat" } )
            records.push_back( rec( fmt::format( "P1_base_{}", n ), s, 1,
                                    n == 2000 && s[ 0 ] == 'p' ? outcome::timeout : outcome::sat, 0.001 * n ) );
    scratch_dir dir( "series" );
    const auto files = plot_series( aggregate( records ), problem::p1, dir.path() );
    ASSERT_EQ( files.size(), 1u );
    const auto text = read_file( files[ 0 ] );
    EXPECT_EQ( text.rfind( std::string( series_header ) + "\n", 0 ), 0u );
    std::map< std::string, std::vector< std::size_t > > series;
    std::size_t pos = text.find( '\n' ) + 1;
    while ( pos < text.size() )
    {
        const auto line = text.substr( pos, text.find( '\n', pos ) - pos );
        pos = text.find( '\n', pos ) + 1;
        std::vector< std::string > cols;
        for ( std::size_t s = 0, e; s <= line.size(); s = e + 1 )
        {
            e = std::min( line.find( '\t', s ), line.size() );
            cols.push_back( line.substr( s, e - s ) );
        }
        ASSERT_EQ( cols.size(), 6u );
        series[ cols[ 0 ] ].push_back( std::stoul( cols[ 3 ] ) );
        if ( cols[ 0 ] == "prover9" && cols[ 3 ] == "2000" )
        {
            EXPECT_EQ( cols[ 4 ], "NA" );
            EXPECT_EQ( cols[ 5 ], "timeout" );
        }
    }
    EXPECT_EQ( series.size(), 3u );
    for ( const auto& [ solver, xs ] : series )
        EXPECT_EQ( xs, ( std::vector< std::size_t >{ 50, 100, 200, 500, 1000, 2000 } ) ) << solver;
}

TEST( Series, FifthProblemHasOneFilePerSolver )
{
    std::vector< run_record > records;
    for ( const auto* c : { "a", "b", "c" } )
        for ( auto n : { 50, 100 } )
            for ( const auto* s : { "prover9", "spass", "inkresat" } )
                records.push_back( rec( fmt::format( "P5_{}_{}", c, n ), s, 1, outcome::sat, 0.5 ) );
    scratch_dir dir( "series5" );
    const auto files = plot_series( aggregate( records ), problem::p5, dir.path() );
    ASSERT_EQ( files.size(), 3u );
    for ( const auto& f : files )
    {
        const auto text = read_file( f );
        std::set< std::string > cases;
        for ( const auto* c : { "\ta\t", "\tb\t", "\tc\t" } )
            if ( text.find( c ) != std::string::npos )
                cases.insert( c );
        EXPECT_EQ( cases.size(), 3u ) << f;
    }
    EXPECT_TRUE( std::filesystem::exists( dir / "P5_spass.tsv" ) );
}

TEST( Series, UnknownProblemRejected )
{
    scratch_dir dir( "series-bad" );
    EXPECT_THROW( (void) plot_series( {}, problem( 42 ), dir.path() ), error );
}
