#include "tcb/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

namespace tcb
{

using nlohmann::json;

namespace
{

void reject_unknown( const json& j, std::initializer_list< std::string_view > keys, std::string_view section )
{
    if ( !j.is_object() )
        throw error( fmt::format( "config: '{}' must be an object", section ) );
    for ( const auto& [ key, _ ] : j.items() )
        if ( std::find( keys.begin(), keys.end(), key ) == keys.end() )
            throw error( fmt::format( "config: unknown key '{}' in '{}'", key, section ) );
}

template < typename T >
T get( const json& j, const char* key, std::string_view section )
{
    try
    {
        return j.at( key ).get< T >();
    }
    catch ( const json::exception& e )
    {
        throw error( fmt::format( "config: bad value for '{}.{}': {}", section, key, e.what() ) );
    }
}

gen::gen_config parse_generator( const json& j )
{
    reject_unknown( j,
                    { "seed", "negation_prob", "poisson_lambda", "p3_coverage", "problems", "sizes", "p3_multipliers",
                      "p4_lengths", "p6_ratios" },
                    "generator" );
    auto cfg = gen::default_config();
    constexpr std::string_view sec = "generator";
    if ( j.contains( "seed" ) )
        cfg.seed = get< std::uint64_t >( j, "seed", sec );
    if ( j.contains( "negation_prob" ) )
        cfg.negation_prob = get< double >( j, "negation_prob", sec );
    if ( j.contains( "poisson_lambda" ) )
        cfg.poisson_lambda = get< double >( j, "poisson_lambda", sec );
    if ( j.contains( "p3_coverage" ) )
        cfg.p3_coverage = get< bool >( j, "p3_coverage", sec );
    if ( j.contains( "problems" ) )
    {
        cfg.problems.clear();
        for ( const auto& name : get< std::vector< std::string > >( j, "problems", sec ) )
            cfg.problems.push_back( parse_problem( name ) );
    }
    if ( j.contains( "sizes" ) )
    {
        const auto& sizes = j.at( "sizes" );
        if ( !sizes.is_object() )
            throw error( "config: 'generator.sizes' must be an object" );
        for ( const auto& [ name, list ] : sizes.items() )
            cfg.sizes[ parse_problem( name ) ] = get< std::vector< std::size_t > >( sizes, name.c_str(), "sizes" );
    }
    if ( j.contains( "p3_multipliers" ) )
        cfg.p3_multipliers = get< std::vector< double > >( j, "p3_multipliers", sec );
    if ( j.contains( "p4_lengths" ) )
        cfg.p4_lengths = get< std::vector< std::size_t > >( j, "p4_lengths", sec );
    if ( j.contains( "p6_ratios" ) )
    {
        cfg.p6_ratios.clear();
        for ( const auto& pair : get< std::vector< std::vector< int > > >( j, "p6_ratios", sec ) )
        {
            if ( pair.size() != 2 )
                throw error( "config: each p6 ratio is a [liveness, safety] pair" );
            cfg.p6_ratios.push_back( { pair[ 0 ], pair[ 1 ] } );
        }
    }
    cfg.validate();
    return cfg;
}

harness::solver_adapter parse_adapter( const json& j )
{
    reject_unknown( j, { "name", "executable", "args", "input", "patterns", "version_args" }, "adapter" );
    constexpr std::string_view sec = "adapter";
    harness::solver_adapter a;
    a.name = get< std::string >( j, "name", sec );
    a.executable = get< std::string >( j, "executable", sec );
    a.args = get< std::vector< std::string > >( j, "args", sec );
    a.input = emit::parse_target( get< std::string >( j, "input", sec ) );
    if ( j.contains( "version_args" ) )
        a.version_args = get< std::vector< std::string > >( j, "version_args", sec );
    for ( const auto& p : j.at( "patterns" ) )
    {
        reject_unknown( p, { "regex", "outcome" }, "pattern" );
        a.patterns.push_back(
                { get< std::string >( p, "regex", "pattern" ),
                  harness::parse_outcome( get< std::string >( p, "outcome", "pattern" ) ) } );
    }
    if ( a.name.empty() || a.executable.empty() )
        throw error( "config: adapter needs a name and an executable" );
    if ( std::none_of( a.args.begin(), a.args.end(),
                       []( const std::string& arg ) { return arg.find( "{input}" ) != std::string::npos; } ) )
        throw error( fmt::format( "config: adapter '{}' arguments lack the {{input}} placeholder", a.name ) );
    return a;
}

harness_config parse_harness( const json& j )
{
    reject_unknown( j, { "timeout_s", "mem_cap_bytes", "grace_s", "repeats", "encoding", "adapters" }, "harness" );
    constexpr std::string_view sec = "harness";
    harness_config cfg;
    cfg.adapters = harness::default_adapters();
    if ( j.contains( "timeout_s" ) )
        cfg.lim.timeout_s = get< double >( j, "timeout_s", sec );
    if ( j.contains( "mem_cap_bytes" ) && !j.at( "mem_cap_bytes" ).is_null() )
        cfg.lim.mem_cap_bytes = get< std::uint64_t >( j, "mem_cap_bytes", sec );
    if ( j.contains( "grace_s" ) )
        cfg.lim.grace_s = get< double >( j, "grace_s", sec );
    if ( j.contains( "repeats" ) )
        cfg.repeats = get< int >( j, "repeats", sec );
    if ( j.contains( "encoding" ) )
        cfg.encoding = emit::parse_encoding_mode( get< std::string >( j, "encoding", sec ) );
    if ( j.contains( "adapters" ) )
    {
        cfg.adapters.clear();
        for ( const auto& a : j.at( "adapters" ) )
            cfg.adapters.push_back( parse_adapter( a ) );
    }
    cfg.lim.validate();
    if ( cfg.repeats < 1 )
        throw error( "config: harness.repeats must be at least 1" );
    return cfg;
}

} // namespace

tool_config default_tool_config()
{
    tool_config cfg{ gen::default_config(), {} };
    cfg.harness.adapters = harness::default_adapters();
    return cfg;
}

tool_config parse_tool_config( const json& j )
{
    reject_unknown( j, { "generator", "harness" }, "<root>" );
    auto cfg = default_tool_config();
    if ( j.contains( "generator" ) )
        cfg.generator = parse_generator( j.at( "generator" ) );
    if ( j.contains( "harness" ) )
        cfg.harness = parse_harness( j.at( "harness" ) );
    return cfg;
}

tool_config load_tool_config( const std::filesystem::path& path )
{
    std::ifstream in( path );
    if ( !in )
        throw error( fmt::format( "cannot open config file '{}'", path.string() ) );
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return parse_tool_config( json::parse( buf.str() ) );
    }
    catch ( const json::parse_error& e )
    {
        throw error( fmt::format( "config '{}': {}", path.string(), e.what() ) );
    }
}

nlohmann::ordered_json to_json( const gen::gen_config& cfg )
{
    nlohmann::ordered_json j;
    j[ "seed" ] = cfg.seed;
    j[ "negation_prob" ] = cfg.negation_prob;
    j[ "poisson_lambda" ] = cfg.poisson_lambda;
    j[ "p3_coverage" ] = cfg.p3_coverage;
    auto problems = nlohmann::ordered_json::array();
    for ( auto p : cfg.problems )
        problems.push_back( to_string( p ) );
    j[ "problems" ] = problems;
    nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
    for ( const auto& [ p, list ] : cfg.sizes )
        sizes[ to_string( p ) ] = list;
    j[ "sizes" ] = sizes;
    j[ "p3_multipliers" ] = cfg.p3_multipliers;
    j[ "p4_lengths" ] = cfg.p4_lengths;
    auto ratios = nlohmann::ordered_json::array();
    for ( const auto& r : cfg.p6_ratios )
        ratios.push_back( { r.liveness, r.safety } );
    j[ "p6_ratios" ] = ratios;
    return j;
}

std::string config_digest( const gen::gen_config& cfg )
{
    return sha256_hex( to_json( cfg ).dump() );
}

} // namespace tcb
