#include "tcb/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <regex>
#include <set>
#include <thread>
#include <tuple>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace tcb::harness
{

namespace fs = std::filesystem;
using clock = std::chrono::steady_clock;

std::string_view to_string( outcome o )
{
    switch ( o )
    {
    case outcome::sat: return "SAT";
    case outcome::unsat: return "UNSAT";
    case outcome::proved: return "PROVED";
    case outcome::not_proved: return "NOT_PROVED";
    case outcome::timeout: return "TIMEOUT";
    case outcome::memout: return "MEMOUT";
    case outcome::error: return "ERROR";
    }
    return "ERROR";
}

outcome parse_outcome( std::string_view text )
{
    for ( auto o : { outcome::sat, outcome::unsat, outcome::proved, outcome::not_proved, outcome::timeout,
                     outcome::memout, outcome::error } )
        if ( to_string( o ) == text )
            return o;
    throw error( fmt::format( "unknown outcome '{}'", text ) );
}

std::vector< solver_adapter > default_adapters()
{
    return {
        { "prover9",
          "prover9",
          { "-f", "{input}" },
          emit::target::ladr,
          { { "THEOREM PROVED", outcome::proved },
            { "SEARCH FAILED", outcome::not_proved },
            { "exit \\(sos_empty\\)", outcome::not_proved },
            { "exit \\(max_megs\\)", outcome::memout },
            { "exit \\(max_seconds\\)", outcome::timeout } },
          { "-f", "/dev/null" } },
        { "spass",
          "SPASS",
          { "-TPTP", "-PGiven=0", "-PProblem=0", "{input}" },
          emit::target::tptp,
          { { "SPASS beiseite: Proof found", outcome::proved },
            { "SPASS beiseite: Completion found", outcome::not_proved },
            { "SPASS beiseite: Ran out of time", outcome::timeout },
            { "SPASS beiseite:.*[Mm]emory", outcome::memout } },
          {} },
        { "inkresat",
          "inkresat",
          { "{input}" },
          emit::target::intohylo,
          { { "\\b(unsatisfiable|Unsatisfiable|UNSATISFIABLE)\\b", outcome::unsat },
            { "\\b(satisfiable|Satisfiable|SATISFIABLE)\\b", outcome::sat } },
          {} },
    };
}

void apply_env_overrides( std::vector< solver_adapter >& adapters )
{
    for ( auto& a : adapters )
    {
        std::string var = "TCB_";
        for ( char c : a.name )
            var += std::isalnum( static_cast< unsigned char >( c ) ) ? char( std::toupper( c ) ) : '_';
        var += "_PATH";
        if ( const char* value = std::getenv( var.c_str() ); value && *value )
            a.executable = value;
    }
}

void limits::validate() const
{
    if ( !( timeout_s > 0.0 ) )
        throw error( fmt::format( "timeout must be positive, got {}", timeout_s ) );
    if ( !( grace_s >= 0.0 ) )
        throw error( fmt::format( "grace window must be non-negative, got {}", grace_s ) );
    if ( mem_cap_bytes && *mem_cap_bytes == 0 )
        throw error( "memory cap must be positive" );
}

bool run_record::same_slot( const run_record& other ) const
{
    return std::tie( task_id, solver, version, attempt, result, encoding, source )
           == std::tie( other.task_id, other.solver, other.version, other.attempt, other.result, other.encoding,
                        other.source );
}

// -- classification --------------------------------------------------------------

namespace
{

std::vector< std::string_view > split_lines( std::string_view text )
{
    std::vector< std::string_view > lines;
    std::size_t pos = 0;
    while ( pos <= text.size() )
    {
        const auto end = std::min( text.find( '\n', pos ), text.size() );
        lines.push_back( text.substr( pos, end - pos ) );
        pos = end + 1;
    }
    return lines;
}

bool any_line_matches( const std::regex& re, std::span< const std::string_view > lines )
{
    return std::ranges::any_of( lines, [ & ]( std::string_view line ) {
        return std::regex_search( line.begin(), line.end(), re );
    } );
}

outcome normalise( outcome raw, emit::goal_kind goal )
{
    const bool refuted = raw == outcome::proved || raw == outcome::unsat;
    const bool saturated = raw == outcome::not_proved || raw == outcome::sat;
    if ( goal == emit::goal_kind::sat_check )
    {
        if ( refuted )
            return outcome::unsat;
        if ( saturated )
            return outcome::sat;
    }
    else
    {
        if ( refuted )
            return outcome::proved;
        if ( saturated )
            return outcome::not_proved;
    }
    return raw;
}

const std::regex& memory_signature()
{
    static const std::regex re( "bad_alloc|out of memory|cannot allocate memory|MemoryError|memory exhausted",
                                std::regex::icase );
    return re;
}

} // namespace

outcome classify_output( const solver_adapter& adapter,
                         emit::goal_kind goal,
                         const child_status& status,
                         std::string_view output )
{
    (void) status;
    const auto lines = split_lines( output );
    for ( const auto& p : adapter.patterns )
    {
        std::regex re;
        try
        {
            re = std::regex( p.regex, std::regex::ECMAScript );
        }
        catch ( const std::regex_error& e )
        {
            throw error( fmt::format( "adapter '{}': bad pattern '{}': {}", adapter.name, p.regex, e.what() ) );
        }
        if ( any_line_matches( re, lines ) )
            return normalise( p.result, goal );
    }
    return outcome::error;
}

// -- process control --------------------------------------------------------------

std::optional< fs::path > resolve_executable( const std::string& executable )
{
    if ( executable.empty() )
        return std::nullopt;
    auto runnable = []( const fs::path& p ) {
        std::error_code ec;
        return fs::is_regular_file( p, ec ) && ::access( p.c_str(), X_OK ) == 0;
    };
    if ( executable.find( '/' ) != std::string::npos )
        return runnable( executable ) ? std::optional< fs::path >( fs::absolute( executable ) ) : std::nullopt;

    const char* path = std::getenv( "PATH" );
    std::string_view dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
    while ( !dirs.empty() )
    {
        const auto colon = dirs.find( ':' );
        const auto dir = dirs.substr( 0, colon );
        const fs::path candidate = fs::path( dir.empty() ? "." : std::string( dir ) ) / executable;
        if ( runnable( candidate ) )
            return fs::absolute( candidate );
        if ( colon == std::string_view::npos )
            break;
        dirs.remove_prefix( colon + 1 );
    }
    return std::nullopt;
}

namespace
{

constexpr std::size_t output_cap = std::size_t( 16 ) << 20;
constexpr int exec_failure_code = 127;

void append_capped( std::string& out, const char* data, std::size_t n )
{
    out.append( data, n );
    if ( out.size() > output_cap )
        out.erase( 0, out.size() - output_cap );
}

// Reads whatever is available; returns false once the pipe reached EOF.
bool drain( int fd, std::string& out )
{
    char buf[ 65536 ];
    for ( ;; )
    {
        const auto n = ::read( fd, buf, sizeof buf );
        if ( n > 0 )
        {
            append_capped( out, buf, std::size_t( n ) );
            continue;
        }
        if ( n == 0 )
            return false;
        if ( errno == EINTR )
            continue;
        return errno == EAGAIN || errno == EWOULDBLOCK;
    }
}

[[noreturn]] void exec_child( const std::vector< std::string >& argv, int out_fd, const limits& lim )
{
    ::setpgid( 0, 0 );
    const int null_fd = ::open( "/dev/null", O_RDONLY );
    if ( null_fd >= 0 )
        ::dup2( null_fd, STDIN_FILENO );
    ::dup2( out_fd, STDOUT_FILENO );
    ::dup2( out_fd, STDERR_FILENO );
    if ( lim.mem_cap_bytes )
    {
        rlimit rl{ rlim_t( *lim.mem_cap_bytes ), rlim_t( *lim.mem_cap_bytes ) };
        ::setrlimit( RLIMIT_AS, &rl );
    }

    std::vector< char* > args;
    for ( const auto& a : argv )
        args.push_back( const_cast< char* >( a.c_str() ) );
    args.push_back( nullptr );
    ::execvp( args[ 0 ], args.data() );

    const auto msg = fmt::format( "exec failed: {}: {}\n", argv[ 0 ], std::strerror( errno ) );
    [[maybe_unused]] auto ignored = ::write( STDOUT_FILENO, msg.data(), msg.size() );
    ::_exit( exec_failure_code );
}

} // namespace

process_result run_process( const std::vector< std::string >& argv, const limits& lim )
{
    if ( argv.empty() )
        throw error( "empty command line" );
    lim.validate();

    int fds[ 2 ];
    if ( ::pipe2( fds, O_CLOEXEC ) != 0 )
        throw error( fmt::format( "pipe: {}", std::strerror( errno ) ) );

    const auto start = clock::now();
    const pid_t pid = ::fork();
    if ( pid < 0 )
    {
        ::close( fds[ 0 ] );
        ::close( fds[ 1 ] );
        throw error( fmt::format( "fork: {}", std::strerror( errno ) ) );
    }
    if ( pid == 0 )
        exec_child( argv, fds[ 1 ], lim );

    ::setpgid( pid, pid );
    ::close( fds[ 1 ] );
    ::fcntl( fds[ 0 ], F_SETFL, ::fcntl( fds[ 0 ], F_GETFL ) | O_NONBLOCK );

    using seconds = std::chrono::duration< double >;
    const auto soft_deadline = start + std::chrono::duration_cast< clock::duration >( seconds( lim.timeout_s ) );
    // The hard kill lands slightly inside the grace window so that reaping
    // finishes before it closes.
    const auto hard_deadline = soft_deadline
                               + std::chrono::duration_cast< clock::duration >(
                                       seconds( std::max( 0.0, lim.grace_s - 0.02 ) ) );

    process_result result;
    bool pipe_open = true;
    bool term_sent = false;
    bool kill_sent = false;
    int status = 0;
    rusage usage{};

    for ( ;; )
    {
        const pid_t done = ::wait4( pid, &status, WNOHANG, &usage );
        if ( done == pid )
            break;
        if ( done < 0 && errno != EINTR )
            throw error( fmt::format( "wait4: {}", std::strerror( errno ) ) );

        const auto now = clock::now();
        if ( !term_sent && now >= soft_deadline )
        {
            ::kill( -pid, SIGTERM );
            term_sent = true;
            result.timed_out = true;
        }
        if ( term_sent && !kill_sent && now >= hard_deadline )
        {
            ::kill( -pid, SIGKILL );
            kill_sent = true;
        }

        if ( pipe_open )
        {
            pollfd pfd{ fds[ 0 ], POLLIN, 0 };
            ::poll( &pfd, 1, 2 );
            pipe_open = drain( fds[ 0 ], result.output );
        }
        else
            std::this_thread::sleep_for( std::chrono::milliseconds( 1 ) );
    }
    result.wall_time_s = seconds( clock::now() - start ).count();

    // Descendants left behind by the child go with the group.
    ::kill( -pid, SIGKILL );
    for ( int i = 0; pipe_open && i < 50; ++i )
    {
        pollfd pfd{ fds[ 0 ], POLLIN, 0 };
        ::poll( &pfd, 1, 2 );
        pipe_open = drain( fds[ 0 ], result.output );
    }
    ::close( fds[ 0 ] );

    result.peak_mem_bytes = std::uint64_t( usage.ru_maxrss ) * 1024;
    if ( WIFEXITED( status ) )
        result.status = { true, WEXITSTATUS( status ), 0 };
    else if ( WIFSIGNALED( status ) )
        result.status = { false, 0, WTERMSIG( status ) };
    return result;
}

std::optional< std::string > probe_version( const solver_adapter& adapter )
{
    const auto exe = resolve_executable( adapter.executable );
    if ( !exe )
        return std::nullopt;

    std::vector< std::string > argv{ exe->string() };
    argv.insert( argv.end(), adapter.version_args.begin(), adapter.version_args.end() );
    limits lim;
    lim.timeout_s = 10.0;
    const auto pr = run_process( argv, lim );
    if ( pr.status.exited && pr.status.exit_code == exec_failure_code && pr.output.starts_with( "exec failed" ) )
        return std::nullopt;

    std::string first;
    for ( auto line : split_lines( pr.output ) )
    {
        while ( !line.empty() && std::isspace( static_cast< unsigned char >( line.back() ) ) )
            line.remove_suffix( 1 );
        if ( line.empty() )
            continue;
        if ( first.empty() )
            first = line;
        std::string lower( line );
        std::ranges::transform( lower, lower.begin(), []( unsigned char c ) { return char( std::tolower( c ) ); } );
        if ( lower.find( "version" ) != std::string::npos )
            return std::string( line );
    }
    return first.empty() ? std::string( "unknown" ) : first;
}

std::string utc_timestamp( std::chrono::system_clock::time_point tp )
{
    const auto ms = std::chrono::duration_cast< std::chrono::milliseconds >( tp.time_since_epoch() ).count();
    const std::time_t secs = std::time_t( ms / 1000 );
    std::tm tm{};
    ::gmtime_r( &secs, &tm );
    return fmt::format( "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                        tm.tm_hour, tm.tm_min, tm.tm_sec, int( ms % 1000 ) );
}

run_record run_solver( const solver_adapter& adapter,
                       const fs::path& input,
                       const limits& lim,
                       emit::goal_kind goal,
                       std::string_view version )
{
    const auto exe = resolve_executable( adapter.executable );
    if ( !exe )
        throw error( fmt::format( "solver '{}': executable '{}' not found", adapter.name, adapter.executable ) );

    std::vector< std::string > argv{ exe->string() };
    for ( auto arg : adapter.args )
    {
        for ( auto pos = arg.find( "{input}" ); pos != std::string::npos; pos = arg.find( "{input}", pos ) )
        {
            arg.replace( pos, 7, input.string() );
            pos += input.string().size();
        }
        argv.push_back( std::move( arg ) );
    }

    run_record rec;
    rec.solver = adapter.name;
    rec.version = std::string( version );
    rec.timestamp = utc_timestamp( std::chrono::system_clock::now() );
    const auto pr = run_process( argv, lim );
    rec.wall_time_s = pr.wall_time_s;
    rec.peak_mem_bytes = pr.peak_mem_bytes;

    if ( pr.timed_out )
        rec.result = outcome::timeout;
    else
    {
        rec.result = classify_output( adapter, goal, pr.status, pr.output );
        const bool over_cap = lim.mem_cap_bytes && pr.peak_mem_bytes >= *lim.mem_cap_bytes;
        const bool memory_failure = lim.mem_cap_bytes && std::regex_search( pr.output, memory_signature() );
        if ( rec.result == outcome::error && ( over_cap || memory_failure ) )
            rec.result = outcome::memout;
    }

    if ( rec.result == outcome::error )
    {
        constexpr std::size_t tail = 2000;
        const auto excerpt = pr.output.size() > tail ? pr.output.substr( pr.output.size() - tail ) : pr.output;
        rec.diagnostic = pr.status.exited ? fmt::format( "exit {}; output: {}", pr.status.exit_code, excerpt )
                                          : fmt::format( "signal {}; output: {}", pr.status.signal, excerpt );
    }
    return rec;
}

// -- journal ----------------------------------------------------------------------

std::string to_json_line( const run_record& r )
{
    nlohmann::ordered_json j;
    j[ "source" ] = r.source;
    j[ "task" ] = r.task_id;
    j[ "solver" ] = r.solver;
    j[ "version" ] = r.version;
    j[ "attempt" ] = r.attempt;
    j[ "outcome" ] = std::string( to_string( r.result ) );
    j[ "wall_time_s" ] = r.wall_time_s;
    j[ "peak_mem_bytes" ] = r.peak_mem_bytes;
    j[ "encoding" ] = r.encoding;
    j[ "timestamp" ] = r.timestamp;
    j[ "diagnostic" ] = r.diagnostic;
    return j.dump( -1, ' ', false, nlohmann::json::error_handler_t::replace );
}

run_record parse_json_line( std::string_view line )
{
    try
    {
        const auto j = nlohmann::json::parse( line );
        run_record r;
        r.source = j.value( "source", "harness" );
        r.task_id = j.at( "task" ).get< std::string >();
        r.solver = j.at( "solver" ).get< std::string >();
        r.version = j.value( "version", "" );
        r.attempt = j.at( "attempt" ).get< int >();
        r.result = parse_outcome( j.at( "outcome" ).get< std::string >() );
        r.wall_time_s = j.at( "wall_time_s" ).get< double >();
        r.peak_mem_bytes = j.at( "peak_mem_bytes" ).get< std::uint64_t >();
        r.encoding = j.value( "encoding", "" );
        r.timestamp = j.value( "timestamp", "" );
        r.diagnostic = j.value( "diagnostic", "" );
        return r;
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw error( fmt::format( "bad journal record: {}", e.what() ) );
    }
}

std::vector< run_record > journal::load() const
{
    std::vector< run_record > out;
    if ( !fs::exists( _path ) )
        return out;
    std::ifstream in( _path );
    if ( !in )
        throw error( fmt::format( "cannot read journal '{}'", _path.string() ) );
    std::string line;
    std::size_t number = 0;
    while ( std::getline( in, line ) )
    {
        ++number;
        if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
            continue;
        try
        {
            out.push_back( parse_json_line( line ) );
        }
        catch ( const error& e )
        {
            // A torn final line from an interrupted append is dropped.
            if ( in.peek() == std::char_traits< char >::eof() )
                break;
            throw error( fmt::format( "{}:{}: {}", _path.string(), number, e.what() ) );
        }
    }
    return out;
}

void journal::append( const run_record& record ) const
{
    std::ofstream out( _path, std::ios::app );
    if ( !out )
        throw error( fmt::format( "cannot append to journal '{}'", _path.string() ) );
    out << to_json_line( record ) << '\n';
    out.flush();
    if ( !out )
        throw error( fmt::format( "write to journal '{}' failed", _path.string() ) );
}

// -- campaign ---------------------------------------------------------------------

std::vector< run_record > run_benchmark( const catalogue& cat,
                                         const std::vector< prepared_adapter >& adapters,
                                         const fs::path& emitted_dir,
                                         const limits& lim,
                                         const campaign_options& opts )
{
    lim.validate();
    if ( opts.repeats < 1 )
        throw error( "repeats must be at least 1" );

    for ( const auto& t : cat.tasks )
        for ( const auto& a : adapters )
        {
            const auto input = emitted_dir / emit::file_name( t, a.adapter.input );
            if ( !fs::exists( input ) )
                throw error( fmt::format( "missing solver input '{}'", input.string() ) );
        }

    std::optional< journal > jrn;
    std::vector< run_record > records;
    if ( opts.journal_path )
    {
        jrn.emplace( *opts.journal_path );
        records = jrn->load();
    }

    using slot = std::tuple< std::string, std::string, int, std::string >;
    std::set< slot > done;
    for ( const auto& r : records )
        if ( r.source == "harness" )
            done.insert( { r.task_id, r.solver, r.attempt, r.encoding } );

    std::size_t executed = 0;
    for ( const auto& t : cat.tasks )
    {
        const auto goal = emit::goal_of( t );
        for ( const auto& a : adapters )
        {
            const auto input = emitted_dir / emit::file_name( t, a.adapter.input );
            for ( int attempt = 1; attempt <= opts.repeats; ++attempt )
            {
                if ( done.contains( { t.id(), a.adapter.name, attempt, opts.encoding } ) )
                    continue;
                if ( opts.max_new_attempts && executed >= *opts.max_new_attempts )
                    return records;

                run_record rec;
                try
                {
                    rec = run_solver( a.adapter, input, lim, goal, a.version );
                }
                catch ( const error& e )
                {
                    rec.solver = a.adapter.name;
                    rec.version = a.version;
                    rec.timestamp = utc_timestamp( std::chrono::system_clock::now() );
                    rec.result = outcome::error;
                    rec.diagnostic = e.what();
                }
                rec.task_id = t.id();
                rec.attempt = attempt;
                rec.encoding = opts.encoding;
                ++executed;

                if ( jrn )
                    jrn->append( rec );
                if ( opts.on_record )
                    opts.on_record( rec );
                records.push_back( std::move( rec ) );
            }
        }
    }
    return records;
}

} // namespace tcb::harness
