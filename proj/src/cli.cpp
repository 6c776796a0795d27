#include "tcb/cli.hpp"
#include "tcb/analysis.hpp"
#include "tcb/catalogue_io.hpp"
#include "tcb/config.hpp"
#include "tcb/oracle.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace tcb::cli
{

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace
{

struct campaign_failure : error
{
    using error::error;
};

void progress( std::string_view event, ordered_json fields = ordered_json::object() )
{
    ordered_json line;
    line[ "event" ] = event;
    for ( auto& [ key, value ] : fields.items() )
        line[ key ] = value;
    std::cerr << line.dump() << '\n';
}

tool_config resolve_config( const std::string& flag )
{
    if ( !flag.empty() )
        return load_tool_config( flag );
    if ( const char* env = std::getenv( "TCB_CONFIG" ); env && *env )
        return load_tool_config( env );
    return default_tool_config();
}

void require_dir( const fs::path& dir, std::string_view what )
{
    if ( !fs::is_directory( dir ) )
        throw error( fmt::format( "{} '{}' is not a directory", what, dir.string() ) );
}

void require_file( const fs::path& file, std::string_view what )
{
    if ( !fs::is_regular_file( file ) )
        throw error( fmt::format( "{} '{}' does not exist", what, file.string() ) );
}

std::vector< harness::run_record > load_journal( const fs::path& path )
{
    require_file( path, "journal" );
    return harness::journal( path ).load();
}

// -- generate ---------------------------------------------------------------------

struct generate_args
{
    std::string config;
    std::string out;
    std::optional< std::uint64_t > seed;
};

void do_generate( const generate_args& a )
{
    auto cfg = resolve_config( a.config ).generator;
    if ( a.seed )
        cfg.seed = *a.seed;
    cfg.validate();
    if ( fs::exists( a.out ) && !fs::is_directory( a.out ) )
        throw error( fmt::format( "output '{}' exists and is not a directory", a.out ) );

    const auto cat = gen::gen_catalogue( cfg );
    write_catalogue( cat, cfg, a.out );
    progress( "generated",
              { { "tasks", cat.tasks.size() },
                { "dir", a.out },
                { "config_digest", cat.config_digest },
                { "notice", gen::catalogue_notice( cfg ) } } );
}

// -- emit -------------------------------------------------------------------------

struct emit_args
{
    std::string config;
    std::string catalogue;
    std::string out;
    std::vector< std::string > targets{ "tptp", "ladr", "intohylo" };
    std::string mode;
};

void do_emit( const emit_args& a )
{
    require_dir( a.catalogue, "catalogue" );
    std::vector< emit::target > targets;
    for ( const auto& t : a.targets )
        targets.push_back( emit::parse_target( t ) );
    const auto mode = a.mode.empty() ? resolve_config( a.config ).harness.encoding : emit::parse_encoding_mode( a.mode );

    const auto cat = read_catalogue( a.catalogue );
    const auto failures = emit_catalogue( cat, targets, mode, a.out );
    for ( const auto& f : failures )
        progress( "grammar_failure", { { "file", f.file }, { "message", f.message } } );
    progress( "emitted",
              { { "tasks", cat.tasks.size() },
                { "files", cat.tasks.size() * targets.size() },
                { "mode", std::string( emit::to_string( mode ) ) },
                { "grammar_failures", failures.size() } } );
    if ( !failures.empty() )
        throw error( fmt::format( "{} emitted files failed the grammar check", failures.size() ) );
}

// -- run --------------------------------------------------------------------------

struct run_args
{
    std::string config;
    std::string catalogue;
    std::string emitted;
    std::string journal;
    bool allow_partial = false;
    std::optional< double > timeout;
    std::optional< int > repeats;
};

void do_run( const run_args& a )
{
    require_dir( a.catalogue, "catalogue" );
    require_dir( a.emitted, "emitted directory" );
    if ( const auto parent = fs::path( a.journal ).parent_path(); !parent.empty() )
        require_dir( parent, "journal directory" );

    auto cfg = resolve_config( a.config ).harness;
    if ( a.timeout )
        cfg.lim.timeout_s = *a.timeout;
    if ( a.repeats )
        cfg.repeats = *a.repeats;
    cfg.lim.validate();
    if ( cfg.repeats < 1 )
        throw error( "repeats must be at least 1" );

    const auto cat = read_catalogue( a.catalogue );
    const auto mode = read_emit_mode( a.emitted );

    auto adapters = cfg.adapters;
    harness::apply_env_overrides( adapters );
    std::vector< harness::prepared_adapter > usable;
    std::vector< std::string > missing;
    for ( const auto& ad : adapters )
    {
        if ( auto version = harness::probe_version( ad ) )
        {
            progress( "adapter_ready", { { "solver", ad.name }, { "version", *version } } );
            usable.push_back( { ad, *version } );
        }
        else
        {
            progress( "adapter_missing", { { "solver", ad.name }, { "executable", ad.executable } } );
            missing.push_back( ad.name );
        }
    }
    if ( !missing.empty() && !a.allow_partial )
        throw campaign_failure( fmt::format( "{} solver(s) unavailable; pass --allow-partial to run without them",
                                             missing.size() ) );
    if ( usable.empty() )
        throw campaign_failure( "no solver adapter is usable" );

    harness::campaign_options opts;
    opts.repeats = cfg.repeats;
    opts.journal_path = fs::path( a.journal );
    opts.encoding = std::string( emit::to_string( mode ) );
    opts.on_record = []( const harness::run_record& r ) {
        progress( "attempt",
                  { { "task", r.task_id },
                    { "solver", r.solver },
                    { "attempt", r.attempt },
                    { "outcome", std::string( harness::to_string( r.result ) ) },
                    { "wall_time_s", r.wall_time_s } } );
    };
    const auto records = harness::run_benchmark( cat, usable, a.emitted, cfg.lim, opts );
    progress( "campaign_done",
              { { "records", records.size() }, { "journal", a.journal }, { "unavailable", missing } } );
}

// -- oracle-check -----------------------------------------------------------------

struct oracle_args
{
    std::string catalogue;
    std::vector< std::string > tasks;
    std::size_t max_states = 4;
    std::string journal;
};

harness::run_record oracle_record( const task& t, std::size_t max_states )
{
    harness::run_record rec;
    rec.source = "oracle";
    rec.solver = "oracle";
    rec.version = fmt::format( "lasso<={}", max_states );
    rec.task_id = t.id();
    rec.timestamp = harness::utc_timestamp( std::chrono::system_clock::now() );

    const auto start = std::chrono::steady_clock::now();
    const auto res = oracle::bounded_temporal_sat( emit::refutation_body( t ), max_states );
    rec.wall_time_s = std::chrono::duration< double >( std::chrono::steady_clock::now() - start ).count();

    const bool entailment = emit::goal_of( t ) == emit::goal_kind::entailment;
    switch ( res.verdict )
    {
    case oracle::temporal_verdict::sat:
        rec.result = entailment ? harness::outcome::not_proved : harness::outcome::sat;
        break;
    case oracle::temporal_verdict::unsat_proved:
        rec.result = entailment ? harness::outcome::proved : harness::outcome::unsat;
        break;
    case oracle::temporal_verdict::unknown_up_to_bound:
        rec.result = harness::outcome::error;
        rec.diagnostic = fmt::format( "no model with at most {} states; bound not decisive", max_states );
        break;
    }
    return rec;
}

void do_oracle_check( const oracle_args& a )
{
    require_dir( a.catalogue, "catalogue" );
    if ( a.max_states < 1 || a.max_states > oracle::max_trace_states )
        throw error( fmt::format( "--max-states must lie in 1..{}", oracle::max_trace_states ) );
    const auto cat = read_catalogue( a.catalogue );

    std::vector< const task* > selected;
    if ( a.tasks.empty() )
        for ( const auto& t : cat.tasks )
            selected.push_back( &t );
    else
        for ( const auto& id : a.tasks )
        {
            const auto it = std::ranges::find_if( cat.tasks, [ & ]( const task& t ) { return t.id() == id; } );
            if ( it == cat.tasks.end() )
                throw error( fmt::format( "task '{}' is not in the catalogue", id ) );
            selected.push_back( &*it );
        }

    std::optional< harness::journal > jrn;
    if ( !a.journal.empty() )
        jrn.emplace( a.journal );

    std::size_t checked = 0;
    std::size_t skipped = 0;
    for ( const auto* t : selected )
    {
        harness::run_record rec;
        try
        {
            rec = oracle_record( *t, a.max_states );
        }
        catch ( const error& e )
        {
            ++skipped;
            progress( "oracle_skipped", { { "task", t->id() }, { "reason", e.what() } } );
            continue;
        }
        ++checked;
        progress( "oracle_verdict",
                  { { "task", rec.task_id },
                    { "outcome", std::string( harness::to_string( rec.result ) ) },
                    { "wall_time_s", rec.wall_time_s } } );
        if ( jrn )
            jrn->append( rec );
    }
    progress( "oracle_done", { { "checked", checked }, { "skipped", skipped } } );
}

// -- analyze / plot-data ----------------------------------------------------------

struct analyze_args
{
    std::string journal;
    std::string out;
    std::string table;
    std::string rule = "selective";
};

void do_analyze( const analyze_args& a )
{
    if ( a.rule != "selective" && a.rule != "plain" )
        throw error( fmt::format( "unknown average rule '{}'", a.rule ) );
    const auto aggregates = analysis::aggregate( load_journal( a.journal ) );
    analysis::export_csv( aggregates, a.out );

    if ( !a.table.empty() )
    {
        std::set< std::string > solvers;
        for ( const auto& agg : aggregates )
            solvers.insert( agg.solver );
        std::vector< analysis::table_row > rows;
        for ( auto p : { problem::p1, problem::p2, problem::p3, problem::p4, problem::p5, problem::p6 } )
            for ( const auto& s : solvers )
                rows.push_back( { p, s } );
        const auto rule = a.rule == "plain"
                                  ? analysis::average_rule::all_rows()
                                  : analysis::average_rule::selective( { { 100, { "prover9" } }, { 200, { "spass" } } } );
        analysis::export_csv( analysis::summary_table_of( aggregates, rows, { 50, 100, 200, 500 }, rule ), a.table );
    }
    progress( "analyzed", { { "aggregates", aggregates.size() }, { "csv", a.out } } );
}

struct plot_args
{
    std::string journal;
    std::vector< std::string > problems;
    std::string out;
};

void do_plot_data( const plot_args& a )
{
    std::vector< problem > problems;
    for ( const auto& p : a.problems )
        problems.push_back( parse_problem( p ) );
    if ( problems.empty() )
        problems = all_problems();

    const auto aggregates = analysis::aggregate( load_journal( a.journal ) );
    std::size_t files = 0;
    for ( auto p : problems )
        files += analysis::plot_series( aggregates, p, a.out ).size();
    progress( "series_written", { { "files", files }, { "dir", a.out } } );
}

} // namespace

int dispatch( int argc, const char* const* argv )
{
    CLI::App app{ "Temporal-clause prover benchmark toolchain" };
    app.require_subcommand( 1 );
    app.set_help_all_flag( "--help-all", "Show help for every subcommand" );

    generate_args gen_a;
    auto* gen_cmd = app.add_subcommand( "generate", "Generate the task catalogue" );
    gen_cmd->add_option( "--config", gen_a.config, "Configuration file (default: $TCB_CONFIG, else built-in)" );
    gen_cmd->add_option( "--out", gen_a.out, "Catalogue directory" )->required();
    gen_cmd->add_option( "--seed", gen_a.seed, "Override the base seed" );

    emit_args emit_a;
    auto* emit_cmd = app.add_subcommand( "emit", "Write solver input files for a catalogue" );
    emit_cmd->add_option( "--config", emit_a.config, "Configuration file" );
    emit_cmd->add_option( "--catalogue", emit_a.catalogue, "Catalogue directory" )->required();
    emit_cmd->add_option( "--out", emit_a.out, "Output directory" )->required();
    emit_cmd->add_option( "--targets", emit_a.targets, "Formats: tptp, ladr, intohylo, canonical" )
            ->delimiter( ',' )
            ->capture_default_str();
    emit_cmd->add_option( "--mode", emit_a.mode, "Encoding: fol or prop (default from config: fol)" );

    run_args run_a;
    auto* run_cmd = app.add_subcommand( "run", "Run the solver campaign" );
    run_cmd->add_option( "--config", run_a.config, "Configuration file with adapters and limits" );
    run_cmd->add_option( "--catalogue", run_a.catalogue, "Catalogue directory" )->required();
    run_cmd->add_option( "--emitted", run_a.emitted, "Directory produced by emit" )->required();
    run_cmd->add_option( "--journal", run_a.journal, "Results journal (appended, resumable)" )->required();
    run_cmd->add_flag( "--allow-partial", run_a.allow_partial, "Continue with the solvers that are available" );
    run_cmd->add_option( "--timeout", run_a.timeout, "Per-attempt timeout in seconds (default 300)" );
    run_cmd->add_option( "--repeats", run_a.repeats, "Attempts per task and solver (default 3)" );

    oracle_args oracle_a;
    auto* oracle_cmd = app.add_subcommand( "oracle-check", "Decide small tasks with the built-in oracle" );
    oracle_cmd->add_option( "--catalogue", oracle_a.catalogue, "Catalogue directory" )->required();
    oracle_cmd->add_option( "--task", oracle_a.tasks, "Task id (repeatable; default all)" );
    oracle_cmd->add_option( "--max-states", oracle_a.max_states, "Largest lasso model searched" )
            ->capture_default_str();
    oracle_cmd->add_option( "--journal", oracle_a.journal, "Append verdicts to this journal" );

    analyze_args analyze_a;
    auto* analyze_cmd = app.add_subcommand( "analyze", "Aggregate a journal into CSV" );
    analyze_cmd->add_option( "--journal", analyze_a.journal, "Results journal" )->required();
    analyze_cmd->add_option( "--out", analyze_a.out, "Aggregate CSV" )->required();
    analyze_cmd->add_option( "--table", analyze_a.table, "Summary table CSV (P1-P6, 50-500 clauses)" );
    analyze_cmd->add_option( "--rule", analyze_a.rule, "Column averages: selective or plain" )->capture_default_str();

    plot_args plot_a;
    auto* plot_cmd = app.add_subcommand( "plot-data", "Write clauses-vs-time series files" );
    plot_cmd->add_option( "--journal", plot_a.journal, "Results journal" )->required();
    plot_cmd->add_option( "--problem", plot_a.problems, "Problem id, e.g. P1 (repeatable; default all)" );
    plot_cmd->add_option( "--out", plot_a.out, "Series directory" )->required();

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::CallForAllHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e );
        std::cerr << app.help();
        return exit_invalid;
    }

    try
    {
        if ( *gen_cmd )
            do_generate( gen_a );
        else if ( *emit_cmd )
            do_emit( emit_a );
        else if ( *run_cmd )
            do_run( run_a );
        else if ( *oracle_cmd )
            do_oracle_check( oracle_a );
        else if ( *analyze_cmd )
            do_analyze( analyze_a );
        else if ( *plot_cmd )
            do_plot_data( plot_a );
    }
    catch ( const campaign_failure& e )
    {
        progress( "failed", { { "kind", "campaign" }, { "message", e.what() } } );
        return exit_campaign;
    }
    catch ( const std::exception& e )
    {
        progress( "failed", { { "kind", "validation" }, { "message", e.what() } } );
        return exit_invalid;
    }
    return exit_ok;
}

} // namespace tcb::cli
