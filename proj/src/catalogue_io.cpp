#include "tcb/catalogue_io.hpp"
#include "tcb/grammar.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace tcb
{

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string read_file( const fs::path& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw error( fmt::format( "cannot read '{}'", path.string() ) );
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file( const fs::path& path, std::string_view contents )
{
    std::ofstream out( path, std::ios::binary | std::ios::trunc );
    if ( !out )
        throw error( fmt::format( "cannot write '{}'", path.string() ) );
    out.write( contents.data(), std::streamsize( contents.size() ) );
    if ( !out )
        throw error( fmt::format( "short write to '{}'", path.string() ) );
}

void write_catalogue( const catalogue& cat, const gen::gen_config& cfg, const fs::path& dir )
{
    fs::create_directories( dir );

    ordered_json manifest;
    manifest[ "format" ] = "tcbench-manifest";
    manifest[ "version" ] = 1;
    manifest[ "config_digest" ] = cat.config_digest;
    manifest[ "task_count" ] = cat.tasks.size();
    ordered_json breakdown = ordered_json::object();
    for ( auto p : cfg.problems )
        breakdown[ to_string( p ) ] = gen::expected_task_count( p, cfg );
    manifest[ "breakdown" ] = breakdown;
    manifest[ "notice" ] = gen::catalogue_notice( cfg );

    auto entries = ordered_json::array();
    for ( const auto& t : cat.tasks )
    {
        const auto text = emit::emit_canonical( t );
        const auto name = emit::file_name( t, emit::target::canonical );
        write_file( dir / name, text );
        ordered_json e;
        e[ "id" ] = t.id();
        e[ "file" ] = name;
        e[ "digest" ] = sha256_hex( text );
        entries.push_back( std::move( e ) );
    }
    manifest[ "tasks" ] = entries;
    write_file( dir / manifest_file, manifest.dump( 2 ) + "\n" );
}

catalogue read_catalogue( const fs::path& dir )
{
    ordered_json manifest;
    try
    {
        manifest = ordered_json::parse( read_file( dir / manifest_file ) );
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw error( fmt::format( "{}: {}", ( dir / manifest_file ).string(), e.what() ) );
    }
    if ( !manifest.is_object() || manifest.value( "format", "" ) != "tcbench-manifest" || !manifest.contains( "tasks" ) )
        throw error( fmt::format( "{} is not a tcbench manifest", ( dir / manifest_file ).string() ) );

    catalogue cat;
    cat.config_digest = manifest.value( "config_digest", "" );
    for ( const auto& e : manifest[ "tasks" ] )
    {
        const auto file = e.at( "file" ).get< std::string >();
        const auto text = read_file( dir / file );
        if ( sha256_hex( text ) != e.at( "digest" ).get< std::string >() )
            throw error( fmt::format( "{}: digest mismatch", file ) );
        try
        {
            cat.tasks.push_back( emit::parse_canonical( text ) );
        }
        catch ( const error& err )
        {
            throw error( fmt::format( "{}: {}", file, err.what() ) );
        }
    }
    return cat;
}

std::vector< emit_failure > emit_catalogue( const catalogue& cat,
                                            std::span< const emit::target > targets,
                                            emit::encoding_mode mode,
                                            const fs::path& dir )
{
    fs::create_directories( dir );
    std::vector< emit_failure > failures;
    for ( const auto& t : cat.tasks )
        for ( auto format : targets )
        {
            const auto problem = emit::goal_transform( t, format, mode );
            const auto name = emit::file_name( t, format );
            write_file( dir / name, problem.text );
            if ( const auto check = grammar::check( format, problem.text ); !check )
                failures.push_back( { name, fmt::format( "line {}: {}", check.line, check.message ) } );
        }

    ordered_json meta;
    meta[ "mode" ] = std::string( emit::to_string( mode ) );
    auto list = ordered_json::array();
    for ( auto format : targets )
        list.push_back( std::string( emit::to_string( format ) ) );
    meta[ "targets" ] = list;
    write_file( dir / emit_metadata_file, meta.dump( 2 ) + "\n" );
    return failures;
}

emit::encoding_mode read_emit_mode( const fs::path& dir )
{
    const auto path = dir / emit_metadata_file;
    if ( !fs::exists( path ) )
        return emit::encoding_mode::fol_standard;
    try
    {
        const auto meta = nlohmann::json::parse( read_file( path ) );
        return emit::parse_encoding_mode( meta.at( "mode" ).get< std::string >() );
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw error( fmt::format( "{}: {}", path.string(), e.what() ) );
    }
}

} // namespace tcb
