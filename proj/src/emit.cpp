#include "tcb/emit.hpp"

#include <algorithm>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace tcb::emit
{

using ordered_json = nlohmann::ordered_json;

std::string_view to_string( encoding_mode m )
{
    return m == encoding_mode::fol_standard ? "fol" : "prop";
}

std::string_view to_string( target t )
{
    switch ( t )
    {
    case target::tptp: return "tptp";
    case target::ladr: return "ladr";
    case target::intohylo: return "intohylo";
    case target::canonical: return "canonical";
    }
    return "?";
}

std::string_view to_string( goal_kind g )
{
    return g == goal_kind::sat_check ? "sat_check" : "entailment";
}

std::string_view to_string( goal_strategy s )
{
    switch ( s )
    {
    case goal_strategy::direct: return "direct";
    case goal_strategy::native_conjecture: return "native_conjecture";
    case goal_strategy::refutation: return "refutation";
    }
    return "?";
}

encoding_mode parse_encoding_mode( std::string_view text )
{
    if ( text == "fol" )
        return encoding_mode::fol_standard;
    if ( text == "prop" )
        return encoding_mode::propositional;
    throw error( fmt::format( "unknown encoding mode '{}' (expected fol or prop)", text ) );
}

target parse_target( std::string_view text )
{
    for ( auto t : { target::tptp, target::ladr, target::intohylo, target::canonical } )
        if ( to_string( t ) == text )
            return t;
    throw error( fmt::format( "unknown target '{}'", text ) );
}

std::string_view extension( target t )
{
    switch ( t )
    {
    case target::tptp: return ".p";
    case target::ladr: return ".in";
    case target::intohylo: return ".ihl";
    case target::canonical: return ".json";
    }
    return "";
}

goal_kind goal_of( const task& t )
{
    return t.prob == problem::p7 || t.prob == problem::p8 ? goal_kind::entailment : goal_kind::sat_check;
}

// -- first-order translation -------------------------------------------------

namespace
{

fol_node make( fol_node::op kind, std::vector< fol_node > args )
{
    return fol_node{ kind, 0, false, std::move( args ) };
}

fol_node clause_matrix( const temporal_clause& clause, bool timed )
{
    std::vector< fol_node > lits;
    for ( const auto& lit : clause.literals() )
    {
        fol_node p{ fol_node::op::pred, lit.var.id(), timed, {} };
        lits.push_back( lit.negated ? make( fol_node::op::negation, { std::move( p ) } ) : std::move( p ) );
    }
    if ( lits.size() == 1 )
        return std::move( lits.front() );
    return make( fol_node::op::disjunction, std::move( lits ) );
}

void collect_units( const compound& body, encoding_mode mode, std::vector< fol_node >& out )
{
    switch ( body.kind() )
    {
    case compound::op::conjunction:
        for ( const auto& child : body.children() )
            collect_units( child, mode, out );
        return;
    case compound::op::leaf:
        for ( const auto& clause : body.leaf_formula().clauses() )
            out.push_back( translate( clause, mode ) );
        return;
    default:
        out.push_back( translate( body, mode ) );
    }
}

} // namespace

fol_node translate( const temporal_clause& clause, encoding_mode mode )
{
    if ( mode == encoding_mode::propositional )
        return clause_matrix( clause, false );
    const auto quantifier = clause.kind() == clause_kind::liveness ? fol_node::op::exists : fol_node::op::forall;
    return make( quantifier, { clause_matrix( clause, true ) } );
}

fol_node translate( const compound& body, encoding_mode mode )
{
    std::vector< fol_node > args;
    switch ( body.kind() )
    {
    case compound::op::leaf:
    {
        for ( const auto& clause : body.leaf_formula().clauses() )
            args.push_back( translate( clause, mode ) );
        if ( args.empty() )
            throw error( "cannot translate an empty formula" );
        if ( args.size() == 1 )
            return std::move( args.front() );
        return make( fol_node::op::conjunction, std::move( args ) );
    }
    case compound::op::negation: return make( fol_node::op::negation, { translate( body.children()[ 0 ], mode ) } );
    case compound::op::conjunction:
    case compound::op::disjunction:
        for ( const auto& child : body.children() )
            args.push_back( translate( child, mode ) );
        if ( args.size() == 1 )
            return std::move( args.front() );
        return make( body.kind() == compound::op::conjunction ? fol_node::op::conjunction : fol_node::op::disjunction,
                     std::move( args ) );
    case compound::op::implication:
        return make( fol_node::op::implication,
                     { translate( body.children()[ 0 ], mode ), translate( body.children()[ 1 ], mode ) } );
    }
    throw error( "unknown compound node" );
}

fol_problem encode_fol( const task& t, encoding_mode mode )
{
    fol_problem out{ mode, goal_of( t ), {}, std::nullopt };
    if ( out.goal == goal_kind::sat_check )
    {
        collect_units( t.body, mode, out.axioms );
        return out;
    }
    if ( t.body.kind() == compound::op::implication )
    {
        collect_units( t.body.children()[ 0 ], mode, out.axioms );
        out.conjecture = translate( t.body.children()[ 1 ], mode );
    }
    else
        out.conjecture = translate( t.body, mode );
    return out;
}

// -- printers ------------------------------------------------------------------

namespace
{

struct syntax
{
    std::string_view neg;
    std::string_view conj;
    std::string_view disj;
    std::string_view impl;
    std::string_view time_var;
};

constexpr syntax tptp_syntax{ "~ ", " & ", " | ", " => ", "T" };
constexpr syntax ladr_syntax{ "-", " & ", " | ", " -> ", "x" };

void print_fol( const fol_node& n, const syntax& s, bool tptp, std::string& out )
{
    auto infix = [ & ]( std::string_view sep ) {
        out += '(';
        for ( std::size_t i = 0; i < n.args.size(); ++i )
        {
            if ( i )
                out += sep;
            print_fol( n.args[ i ], s, tptp, out );
        }
        out += ')';
    };

    switch ( n.kind )
    {
    case fol_node::op::pred:
        out += fmt::format( "p{}", n.predicate );
        if ( n.timed )
            out += fmt::format( "({})", s.time_var );
        return;
    case fol_node::op::negation:
    {
        out += s.neg;
        // LADR lexes runs of symbol characters as one token, so anything but
        // an atom goes in parentheses.
        const bool wrap = !tptp && n.args[ 0 ].kind != fol_node::op::pred;
        if ( wrap )
            out += '(';
        print_fol( n.args[ 0 ], s, tptp, out );
        if ( wrap )
            out += ')';
        return;
    }
    case fol_node::op::conjunction: infix( s.conj ); return;
    case fol_node::op::disjunction: infix( s.disj ); return;
    case fol_node::op::implication: infix( s.impl ); return;
    case fol_node::op::exists:
    case fol_node::op::forall:
    {
        const bool ex = n.kind == fol_node::op::exists;
        if ( tptp )
        {
            out += fmt::format( "{} [{}] : ", ex ? "?" : "!", s.time_var );
            print_fol( n.args[ 0 ], s, tptp, out );
        }
        else
        {
            out += fmt::format( "{} {} (", ex ? "exists" : "all", s.time_var );
            print_fol( n.args[ 0 ], s, tptp, out );
            out += ')';
        }
        return;
    }
    }
}

void append_header( std::string& out, std::string_view header )
{
    if ( header.empty() )
        return;
    std::size_t pos = 0;
    while ( pos < header.size() )
    {
        const auto end = std::min( header.find( '\n', pos ), header.size() );
        out += "% ";
        out.append( header.substr( pos, end - pos ) );
        out += '\n';
        pos = end + 1;
    }
}

} // namespace

std::string emit_tptp( const fol_problem& problem, std::string_view header )
{
    std::string out;
    append_header( out, header );
    for ( std::size_t i = 0; i < problem.axioms.size(); ++i )
    {
        out += fmt::format( "fof(c{},axiom,", i + 1 );
        print_fol( problem.axioms[ i ], tptp_syntax, true, out );
        out += ").\n";
    }
    if ( problem.conjecture )
    {
        out += "fof(goal,conjecture,";
        print_fol( *problem.conjecture, tptp_syntax, true, out );
        out += ").\n";
    }
    return out;
}

std::string emit_ladr( const fol_problem& problem, std::string_view header )
{
    std::string out;
    append_header( out, header );
    out += "formulas(sos).\n";
    for ( const auto& axiom : problem.axioms )
    {
        print_fol( axiom, ladr_syntax, false, out );
        out += ".\n";
    }
    out += "end_of_list.\n";
    if ( problem.conjecture )
    {
        out += "\nformulas(goals).\n";
        print_fol( *problem.conjecture, ladr_syntax, false, out );
        out += ".\nend_of_list.\n";
    }
    return out;
}

namespace
{

void print_modal_clause( const temporal_clause& clause, std::string& out )
{
    out += clause.kind() == clause_kind::liveness ? "<r1>" : "[r1]";
    const bool wrap = clause.length() > 1;
    if ( wrap )
        out += '(';
    bool first = true;
    for ( const auto& lit : clause.literals() )
    {
        if ( !first )
            out += " | ";
        first = false;
        if ( lit.negated )
            out += '~';
        out += fmt::format( "p{}", lit.var.id() );
    }
    if ( wrap )
        out += ')';
}

void print_modal( const compound& body, std::string& out )
{
    auto infix = [ & ]( std::string_view sep ) {
        const auto kids = body.children();
        if ( kids.size() == 1 )
        {
            print_modal( kids[ 0 ], out );
            return;
        }
        out += '(';
        for ( std::size_t i = 0; i < kids.size(); ++i )
        {
            if ( i )
                out += sep;
            print_modal( kids[ i ], out );
        }
        out += ')';
    };

    switch ( body.kind() )
    {
    case compound::op::leaf:
    {
        const auto clauses = body.leaf_formula().clauses();
        if ( clauses.empty() )
            throw error( "cannot encode an empty formula" );
        if ( clauses.size() > 1 )
            out += '(';
        for ( std::size_t i = 0; i < clauses.size(); ++i )
        {
            if ( i )
                out += " & ";
            print_modal_clause( clauses[ i ], out );
        }
        if ( clauses.size() > 1 )
            out += ')';
        return;
    }
    case compound::op::negation:
        out += '~';
        print_modal( body.children()[ 0 ], out );
        return;
    case compound::op::conjunction: infix( " & " ); return;
    case compound::op::disjunction: infix( " | " ); return;
    case compound::op::implication: infix( " -> " ); return;
    }
}

void modal_units( const compound& body, std::vector< std::string >& out )
{
    if ( body.kind() == compound::op::conjunction )
    {
        for ( const auto& child : body.children() )
            modal_units( child, out );
        return;
    }
    if ( body.kind() == compound::op::leaf )
    {
        for ( const auto& clause : body.leaf_formula().clauses() )
        {
            std::string unit;
            print_modal_clause( clause, unit );
            out.push_back( std::move( unit ) );
        }
        return;
    }
    std::string unit;
    print_modal( body, unit );
    out.push_back( std::move( unit ) );
}

} // namespace

std::string emit_intohylo( const compound& body )
{
    std::vector< std::string > units;
    modal_units( body, units );
    if ( units.empty() )
        throw error( "cannot encode an empty formula" );
    std::string out = "begin\n";
    for ( std::size_t i = 0; i < units.size(); ++i )
    {
        out += units[ i ];
        out += i + 1 < units.size() ? " &\n" : "\n";
    }
    out += "end\n";
    return out;
}

compound refutation_body( const task& t )
{
    if ( goal_of( t ) == goal_kind::sat_check )
        return t.body;
    if ( t.body.kind() == compound::op::implication )
        return compound::conj( { t.body.children()[ 0 ], compound::negate( t.body.children()[ 1 ] ) } );
    return compound::negate( t.body );
}

std::string emit_intohylo( const task& t )
{
    return emit_intohylo( refutation_body( t ) );
}

solver_problem goal_transform( const task& t, target format, encoding_mode mode )
{
    const auto goal = goal_of( t );
    solver_problem out{ format, mode, goal, goal_strategy::direct, {} };
    switch ( format )
    {
    case target::tptp:
    case target::ladr:
    {
        if ( goal == goal_kind::entailment )
            out.strategy = goal_strategy::native_conjecture;
        const auto header = fmt::format( "task {} seed {}\ngoal {} strategy {} encoding {}", t.id(), t.seed,
                                         to_string( goal ), to_string( out.strategy ), to_string( mode ) );
        const auto fol = encode_fol( t, mode );
        out.text = format == target::tptp ? emit_tptp( fol, header ) : emit_ladr( fol, header );
        break;
    }
    case target::intohylo:
        if ( goal == goal_kind::entailment )
            out.strategy = goal_strategy::refutation;
        out.text = emit_intohylo( t );
        break;
    case target::canonical: out.text = emit_canonical( t ); break;
    }
    return out;
}

// -- canonical interchange -----------------------------------------------------

namespace
{

ordered_json to_json( const compound& body )
{
    ordered_json j;
    j[ "op" ] = std::string( to_string( body.kind() ) );
    switch ( body.kind() )
    {
    case compound::op::leaf:
    {
        const auto& f = body.leaf_formula();
        j[ "atom_pool_size" ] = f.atom_pool_size();
        auto clauses = ordered_json::array();
        for ( const auto& clause : f.clauses() )
        {
            ordered_json c;
            c[ "kind" ] = clause.kind() == clause_kind::liveness ? "L" : "S";
            auto lits = ordered_json::array();
            for ( const auto& lit : clause.literals() )
                lits.push_back( lit.to_signed() );
            c[ "lits" ] = std::move( lits );
            clauses.push_back( std::move( c ) );
        }
        j[ "clauses" ] = std::move( clauses );
        break;
    }
    case compound::op::negation: j[ "arg" ] = to_json( body.children()[ 0 ] ); break;
    case compound::op::conjunction:
    case compound::op::disjunction:
    {
        auto args = ordered_json::array();
        for ( const auto& child : body.children() )
            args.push_back( to_json( child ) );
        j[ "args" ] = std::move( args );
        break;
    }
    case compound::op::implication:
        j[ "lhs" ] = to_json( body.children()[ 0 ] );
        j[ "rhs" ] = to_json( body.children()[ 1 ] );
        break;
    }
    return j;
}

[[noreturn]] void malformed( const std::string& what )
{
    throw canonical_error( canonical_error::kind::malformed, "malformed task: " + what );
}

[[noreturn]] void violation( const std::string& what )
{
    throw canonical_error( canonical_error::kind::invariant_violation, "invariant violation: " + what );
}

void expect_keys( const ordered_json& j, std::initializer_list< std::string_view > keys, std::string_view where )
{
    if ( !j.is_object() )
        malformed( fmt::format( "{} must be an object", where ) );
    for ( const auto& [ key, _ ] : j.items() )
        if ( std::find( keys.begin(), keys.end(), key ) == keys.end() )
            malformed( fmt::format( "unexpected field '{}' in {}", key, where ) );
    for ( auto key : keys )
        if ( !j.contains( std::string( key ) ) )
            malformed( fmt::format( "missing field '{}' in {}", key, where ) );
}

compound from_json( const ordered_json& j, int depth )
{
    if ( depth > 256 )
        malformed( "nesting too deep" );
    if ( !j.is_object() || !j.contains( "op" ) || !j[ "op" ].is_string() )
        malformed( "node without an 'op' string" );
    const auto op = j[ "op" ].get< std::string >();

    if ( op == "leaf" )
    {
        expect_keys( j, { "op", "atom_pool_size", "clauses" }, "leaf" );
        if ( !j[ "atom_pool_size" ].is_number_unsigned() )
            malformed( "atom_pool_size must be a non-negative integer" );
        const auto pool64 = j[ "atom_pool_size" ].get< std::uint64_t >();
        if ( pool64 == 0 || pool64 > UINT32_MAX )
            violation( "atom_pool_size must be positive" );
        const auto pool = std::uint32_t( pool64 );
        if ( !j[ "clauses" ].is_array() )
            malformed( "clauses must be an array" );

        std::vector< temporal_clause > clauses;
        for ( const auto& c : j[ "clauses" ] )
        {
            expect_keys( c, { "kind", "lits" }, "clause" );
            if ( !c[ "kind" ].is_string() || ( c[ "kind" ] != "L" && c[ "kind" ] != "S" ) )
                malformed( "clause kind must be \"L\" or \"S\"" );
            if ( !c[ "lits" ].is_array() )
                malformed( "lits must be an array" );
            if ( c[ "lits" ].empty() )
                violation( "empty clause" );

            std::vector< literal > lits;
            for ( const auto& l : c[ "lits" ] )
            {
                if ( !l.is_number_integer() )
                    malformed( "literal must be an integer" );
                const auto v = l.get< std::int64_t >();
                if ( v == 0 )
                    violation( "atom id 0" );
                const auto id = std::uint64_t( v < 0 ? -v : v );
                if ( id > pool )
                    violation( fmt::format( "atom {} exceeds pool size {}", id, pool ) );
                for ( const auto& prev : lits )
                    if ( prev.var.id() == id )
                        violation( fmt::format( "atom {} repeated in a clause", id ) );
                lits.push_back( { atom{ std::uint32_t( id ) }, v < 0 } );
            }
            clauses.emplace_back( c[ "kind" ] == "L" ? clause_kind::liveness : clause_kind::safety, std::move( lits ) );
        }
        return compound::leaf( formula{ std::move( clauses ), pool } );
    }
    if ( op == "not" )
    {
        expect_keys( j, { "op", "arg" }, "not" );
        return compound::negate( from_json( j[ "arg" ], depth + 1 ) );
    }
    if ( op == "and" || op == "or" )
    {
        expect_keys( j, { "op", "args" }, op );
        if ( !j[ "args" ].is_array() )
            malformed( "args must be an array" );
        if ( j[ "args" ].empty() )
            violation( fmt::format( "'{}' without operands", op ) );
        std::vector< compound > kids;
        for ( const auto& a : j[ "args" ] )
            kids.push_back( from_json( a, depth + 1 ) );
        return op == "and" ? compound::conj( std::move( kids ) ) : compound::disj( std::move( kids ) );
    }
    if ( op == "implies" )
    {
        expect_keys( j, { "op", "lhs", "rhs" }, "implies" );
        return compound::implies( from_json( j[ "lhs" ], depth + 1 ), from_json( j[ "rhs" ], depth + 1 ) );
    }
    malformed( fmt::format( "unknown op '{}'", op ) );
}

} // namespace

std::string emit_canonical( const task& t )
{
    ordered_json j;
    j[ "format" ] = "tcbench-task";
    j[ "version" ] = canonical_version;
    j[ "problem" ] = to_string( t.prob );
    j[ "subcase" ] = t.subcase;
    j[ "n_clauses" ] = t.n_clauses;
    j[ "seed" ] = t.seed;
    j[ "body" ] = to_json( t.body );
    return j.dump() + "\n";
}

task parse_canonical( std::string_view text )
{
    ordered_json j;
    try
    {
        j = ordered_json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        malformed( e.what() );
    }
    if ( !j.is_object() )
        malformed( "top level must be an object" );
    if ( !j.contains( "format" ) || j[ "format" ] != "tcbench-task" )
        malformed( "not a tcbench-task document" );
    if ( !j.contains( "version" ) || !j[ "version" ].is_number_integer() )
        malformed( "missing integer version" );
    if ( j[ "version" ].get< std::int64_t >() != canonical_version )
        throw canonical_error( canonical_error::kind::unknown_version,
                               fmt::format( "unsupported task format version {}", j[ "version" ].dump() ) );
    expect_keys( j, { "format", "version", "problem", "subcase", "n_clauses", "seed", "body" }, "task" );

    if ( !j[ "problem" ].is_string() || !j[ "subcase" ].is_string() || !j[ "n_clauses" ].is_number_unsigned()
         || !j[ "seed" ].is_number_unsigned() )
        malformed( "task header fields have the wrong types" );

    problem prob;
    try
    {
        prob = parse_problem( j[ "problem" ].get< std::string >() );
    }
    catch ( const error& e )
    {
        malformed( e.what() );
    }
    auto subcase = j[ "subcase" ].get< std::string >();
    if ( subcase.empty() || subcase.find( '_' ) != std::string::npos )
        violation( "subcase must be non-empty and free of '_'" );
    const auto n = j[ "n_clauses" ].get< std::uint64_t >();
    if ( n == 0 )
        violation( "n_clauses must be positive" );

    return task{ prob, std::move( subcase ), std::size_t( n ), j[ "seed" ].get< std::uint64_t >(),
                 from_json( j[ "body" ], 0 ) };
}

std::string file_stem( const task& t )
{
    return fmt::format( "{}_{}", t.id(), t.seed );
}

std::string file_name( const task& t, target format )
{
    return file_stem( t ) + std::string( extension( format ) );
}

} // namespace tcb::emit
