#include "tcb/analysis.hpp"
#include "tcb/catalogue_io.hpp"
#include "tcb/gen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include <fmt/core.h>

namespace tcb::analysis
{

namespace fs = std::filesystem;
using harness::outcome;
using harness::run_record;

namespace
{

std::size_t subcase_rank( problem p, const std::string& label )
{
    static const auto cfg = gen::default_config();
    const auto labels = gen::subcase_labels( p, cfg );
    const auto it = std::ranges::find( labels, label );
    return it == labels.end() ? labels.size() : std::size_t( it - labels.begin() );
}

auto order_key( const std::string& id )
{
    const auto key = parse_task_id( id );
    return std::make_tuple( key.prob, subcase_rank( key.prob, key.subcase ), key.subcase, key.n_clauses );
}

double sorted_sum( std::vector< double > values )
{
    std::ranges::sort( values );
    return std::accumulate( values.begin(), values.end(), 0.0 );
}

} // namespace

bool task_order_less( const std::string& a, const std::string& b )
{
    return order_key( a ) < order_key( b );
}

std::vector< aggregate_record > aggregate( const std::vector< run_record >& records )
{
    using group_key = std::tuple< std::string, std::string, std::string >;
    std::map< group_key, std::vector< const run_record* > > groups;
    for ( const auto& r : records )
        if ( r.source == "harness" )
            groups[ { r.task_id, r.solver, r.encoding } ].push_back( &r );

    std::vector< aggregate_record > out;
    out.reserve( groups.size() );
    for ( const auto& [ key, members ] : groups )
    {
        aggregate_record agg;
        std::tie( agg.task_id, agg.solver, agg.encoding ) = key;
        agg.attempts = int( members.size() );

        std::vector< double > times;
        std::vector< double > mems;
        std::set< outcome > seen;
        for ( const auto* r : members )
        {
            seen.insert( r->result );
            if ( harness::is_resource_failure( r->result ) )
            {
                ++agg.exclusions;
                continue;
            }
            times.push_back( r->wall_time_s );
            mems.push_back( double( r->peak_mem_bytes ) );
        }
        if ( !times.empty() )
        {
            agg.mean_time_s = sorted_sum( times ) / double( times.size() );
            agg.mean_mem_bytes = sorted_sum( mems ) / double( mems.size() );
        }
        if ( seen.size() == 1 )
            agg.consensus = *seen.begin();
        else
            agg.anomaly = true;
        out.push_back( std::move( agg ) );
    }

    std::ranges::stable_sort( out, []( const aggregate_record& a, const aggregate_record& b ) {
        if ( a.task_id != b.task_id )
            return task_order_less( a.task_id, b.task_id );
        return std::tie( a.solver, a.encoding ) < std::tie( b.solver, b.encoding );
    } );
    return out;
}

bool average_rule::selects( const table_row& row, std::size_t column ) const
{
    if ( plain )
        return true;
    const auto it = accepted.find( column );
    return it != accepted.end() && it->second.contains( row.solver );
}

summary_table summary_table_of( const std::vector< aggregate_record >& aggregates,
                                const std::vector< table_row >& rows,
                                const std::vector< std::size_t >& columns,
                                const average_rule& rule )
{
    std::map< std::tuple< problem, std::string, std::size_t >, std::vector< double > > buckets;
    for ( const auto& a : aggregates )
    {
        if ( !a.mean_time_s )
            continue;
        const auto key = parse_task_id( a.task_id );
        buckets[ { key.prob, a.solver, key.n_clauses } ].push_back( *a.mean_time_s );
    }

    summary_table table{ rows, columns, {}, {} };
    for ( const auto& row : rows )
    {
        auto& line = table.cells.emplace_back();
        for ( auto n : columns )
        {
            const auto it = buckets.find( { row.prob, row.solver, n } );
            if ( it == buckets.end() )
                line.emplace_back();
            else
                line.emplace_back( sorted_sum( it->second ) / double( it->second.size() ) );
        }
    }

    for ( std::size_t c = 0; c < columns.size(); ++c )
    {
        std::vector< double > picked;
        for ( std::size_t r = 0; r < rows.size(); ++r )
            if ( rule.selects( rows[ r ], columns[ c ] ) && table.cells[ r ][ c ] )
                picked.push_back( *table.cells[ r ][ c ] );
        if ( picked.empty() )
            table.averages.emplace_back();
        else
            table.averages.emplace_back( std::accumulate( picked.begin(), picked.end(), 0.0 ) / double( picked.size() ) );
    }
    return table;
}

std::string format_number( double value )
{
    if ( !std::isfinite( value ) )
        return "NA";
    char buf[ 64 ];
    const auto res = std::to_chars( buf, buf + sizeof buf, value );
    return std::string( buf, res.ptr );
}

namespace
{

std::string optional_number( const std::optional< double >& v )
{
    return v ? format_number( *v ) : std::string();
}

} // namespace

std::string to_csv( const std::vector< aggregate_record >& aggregates )
{
    std::string out( csv_header );
    out += '\n';
    for ( const auto& a : aggregates )
    {
        const auto key = parse_task_id( a.task_id );
        out += fmt::format( "{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string( key.prob ), key.subcase, key.n_clauses,
                            a.solver, a.encoding, optional_number( a.mean_time_s ),
                            optional_number( a.mean_mem_bytes ),
                            a.consensus ? std::string( harness::to_string( *a.consensus ) ) : std::string( "MIXED" ),
                            a.anomaly ? 1 : 0, a.exclusions, a.attempts, a.task_id );
    }
    return out;
}

std::string to_csv( const summary_table& table )
{
    std::string out = "problem,solver";
    for ( auto n : table.columns )
        out += fmt::format( ",{}", n );
    out += '\n';
    for ( std::size_t r = 0; r < table.rows.size(); ++r )
    {
        out += fmt::format( "{},{}", to_string( table.rows[ r ].prob ), table.rows[ r ].solver );
        for ( const auto& cell : table.cells[ r ] )
            out += "," + optional_number( cell );
        out += '\n';
    }
    out += "average,";
    for ( const auto& avg : table.averages )
        out += "," + optional_number( avg );
    out += '\n';
    return out;
}

void export_csv( const std::vector< aggregate_record >& aggregates, const fs::path& path )
{
    write_file( path, to_csv( aggregates ) );
}

void export_csv( const summary_table& table, const fs::path& path )
{
    write_file( path, to_csv( table ) );
}

namespace
{

struct point
{
    const aggregate_record* agg;
    task_key key;
};

std::string series_status( const aggregate_record& a )
{
    if ( a.mean_time_s )
        return a.anomaly ? "anomaly" : "ok";
    return a.consensus == outcome::memout ? "memout" : "timeout";
}

std::string render_series( std::vector< point > points, bool solver_major )
{
    std::ranges::stable_sort( points, [ solver_major ]( const point& x, const point& y ) {
        const auto sx = subcase_rank( x.key.prob, x.key.subcase );
        const auto sy = subcase_rank( y.key.prob, y.key.subcase );
        const auto ax = std::tie( x.agg->solver, x.agg->encoding );
        const auto ay = std::tie( y.agg->solver, y.agg->encoding );
        const auto cx = std::tie( sx, x.key.subcase );
        const auto cy = std::tie( sy, y.key.subcase );
        if ( solver_major ? ax != ay : cx != cy )
            return solver_major ? ax < ay : cx < cy;
        if ( solver_major ? cx != cy : ax != ay )
            return solver_major ? cx < cy : ax < ay;
        return x.key.n_clauses < y.key.n_clauses;
    } );

    std::string out( series_header );
    out += '\n';
    for ( const auto& p : points )
        out += fmt::format( "{}\t{}\t{}\t{}\t{}\t{}\n", p.agg->solver, p.agg->encoding, p.key.subcase, p.key.n_clauses,
                            p.agg->mean_time_s ? format_number( *p.agg->mean_time_s ) : std::string( "NA" ),
                            series_status( *p.agg ) );
    return out;
}

} // namespace

std::vector< fs::path > plot_series( const std::vector< aggregate_record >& aggregates,
                                     problem prob,
                                     const fs::path& out_dir )
{
    const auto known = all_problems();
    if ( std::ranges::find( known, prob ) == known.end() )
        throw error( fmt::format( "unknown problem id {}", int( prob ) ) );

    std::vector< point > points;
    for ( const auto& a : aggregates )
    {
        auto key = parse_task_id( a.task_id );
        if ( key.prob == prob )
            points.push_back( { &a, std::move( key ) } );
    }

    fs::create_directories( out_dir );
    std::vector< fs::path > written;
    const bool per_solver = prob >= problem::p5;
    if ( !per_solver )
    {
        const auto path = out_dir / fmt::format( "{}.tsv", to_string( prob ) );
        write_file( path, render_series( std::move( points ), true ) );
        written.push_back( path );
        return written;
    }

    std::map< std::string, std::vector< point > > by_solver;
    for ( auto& p : points )
        by_solver[ p.agg->solver ].push_back( p );
    for ( auto& [ solver, pts ] : by_solver )
    {
        const auto path = out_dir / fmt::format( "{}_{}.tsv", to_string( prob ), solver );
        write_file( path, render_series( std::move( pts ), false ) );
        written.push_back( path );
    }
    return written;
}

} // namespace tcb::analysis
