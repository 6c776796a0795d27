#include "helpers.hpp"
#include "tcb/emit.hpp"
#include "tcb/gen.hpp"
#include "tcb/grammar.hpp"

#include <gtest/gtest.h>

#include <fmt/core.h>

#include <regex>

using namespace tcb;
using namespace tcb::emit;
using namespace tcb::test;

namespace
{

task sat_task( compound body )
{
    return { problem::p1, "base", 50, 1, std::move( body ) };
}

std::size_t count_of( const std::string& text, const std::string& needle )
{
    std::size_t n = 0;
    for ( auto pos = text.find( needle ); pos != std::string::npos; pos = text.find( needle, pos + 1 ) )
        ++n;
    return n;
}

const task& catalogue_task( problem p, std::string_view subcase, std::size_t n )
{
    static const auto cat = gen::gen_catalogue( gen::default_config() );
    for ( const auto& t : cat.tasks )
        if ( t.prob == p && t.subcase == subcase && t.n_clauses == n )
            return t;
    throw error( "task not in catalogue" );
}

} // namespace

TEST( Translate, LivenessClauseBecomesExistential )
{
    const auto n = translate( live( { 1, -2 } ), encoding_mode::fol_standard );
    ASSERT_EQ( n.kind, fol_node::op::exists );
    ASSERT_EQ( n.args.size(), 1u );
    const auto& d = n.args[ 0 ];
    ASSERT_EQ( d.kind, fol_node::op::disjunction );
    ASSERT_EQ( d.args.size(), 2u );
    EXPECT_EQ( d.args[ 0 ].kind, fol_node::op::pred );
    EXPECT_EQ( d.args[ 0 ].predicate, 1u );
    EXPECT_TRUE( d.args[ 0 ].timed );
    EXPECT_EQ( d.args[ 1 ].kind, fol_node::op::negation );
    EXPECT_EQ( d.args[ 1 ].args[ 0 ].predicate, 2u );
}

TEST( Translate, AbstractionErasesTheOperator )
{
    const auto n = translate( safe( { 1 } ), encoding_mode::propositional );
    EXPECT_EQ( n.kind, fol_node::op::pred );
    EXPECT_EQ( n.predicate, 1u );
    EXPECT_FALSE( n.timed );
}

TEST( Translate, ImplicationIsHomomorphic )
{
    const auto f = leaf( 2, { live( { 1 } ) } );
    const auto r = leaf( 2, { safe( { 2 } ) } );
    const auto n = translate( compound::implies( f, r ), encoding_mode::fol_standard );
    ASSERT_EQ( n.kind, fol_node::op::implication );
    EXPECT_EQ( n.args[ 0 ].kind, fol_node::op::exists );
    EXPECT_EQ( n.args[ 1 ].kind, fol_node::op::forall );
}

TEST( Tptp, SingleLivenessClause )
{
    const auto text = emit_tptp( encode_fol( sat_task( leaf( 2, { live( { 1, 2 } ) } ) ), encoding_mode::fol_standard ) );
    EXPECT_EQ( text, "fof(c1,axiom,? [T] : (p1(T) | p2(T))).\n" );
    EXPECT_EQ( count_of( text, "conjecture" ), 0u );
    EXPECT_TRUE( grammar::check_tptp( text ) );
}

TEST( Tptp, PropositionalMode )
{
    const auto text = emit_tptp( encode_fol( sat_task( leaf( 2, { safe( { 1 } ), live( { -2, 1 } ) } ) ),
                                             encoding_mode::propositional ) );
    EXPECT_EQ( text, "fof(c1,axiom,p1).\nfof(c2,axiom,(~ p2 | p1)).\n" );
    EXPECT_TRUE( grammar::check_tptp( text ) );
}

TEST( Tptp, SeventhProblemHasOneConjecture )
{
    const auto& t = catalogue_task( problem::p7, "a", 50 );
    const auto text = goal_transform( t, target::tptp, encoding_mode::fol_standard ).text;
    EXPECT_EQ( count_of( text, ",conjecture," ), 1u );
    EXPECT_TRUE( grammar::check_tptp( text ) );
}

TEST( Ladr, ShapesForSatCheckAndEntailment )
{
    const auto text = emit_ladr( encode_fol( sat_task( leaf( 2, { live( { 1, -2 } ) } ) ), encoding_mode::fol_standard ) );
    EXPECT_EQ( text, "formulas(sos).\nexists x ((p1(x) | -p2(x))).\nend_of_list.\n" );
    EXPECT_EQ( count_of( text, "formulas(goals)" ), 0u );
    EXPECT_TRUE( grammar::check_ladr( text ) );

    const auto& t = catalogue_task( problem::p7, "c", 100 );
    const auto p7 = goal_transform( t, target::ladr, encoding_mode::fol_standard );
    EXPECT_EQ( p7.strategy, goal_strategy::native_conjecture );
    EXPECT_EQ( count_of( p7.text, "formulas(goals)" ), 1u );
    EXPECT_TRUE( grammar::check_ladr( p7.text ) );

    // The goals block holds R, the single liveness clause.
    const auto goals = p7.text.substr( p7.text.find( "formulas(goals)." ) );
    const auto& r = t.body.children()[ 1 ].leaf_formula().clauses()[ 0 ];
    for ( const auto& l : r.literals() )
        EXPECT_NE( goals.find( fmt::format( "p{}(x)", l.var.id() ) ), std::string::npos );
    EXPECT_EQ( count_of( goals, "exists" ), 1u );
}

TEST( Ladr, NegatedCompoundIsParenthesised )
{
    const auto body = compound::negate( compound::negate( leaf( 1, { safe( { -1 } ) } ) ) );
    const auto text = emit_ladr( encode_fol( sat_task( body ), encoding_mode::fol_standard ) );
    EXPECT_EQ( text.find( "--" ), std::string::npos );
    EXPECT_TRUE( grammar::check_ladr( text ) );
}

TEST( InToHyLo, DiamondAndBox )
{
    EXPECT_EQ( emit_intohylo( leaf( 2, { live( { 1, -2 } ) } ) ), "begin\n<r1>(p1 | ~p2)\nend\n" );
    EXPECT_EQ( emit_intohylo( leaf( 1, { safe( { 1 } ) } ) ), "begin\n[r1]p1\nend\n" );
    const auto two = emit_intohylo( leaf( 2, { safe( { 1 } ), live( { 2 } ) } ) );
    EXPECT_EQ( two, "begin\n[r1]p1 &\n<r1>p2\nend\n" );
    EXPECT_TRUE( grammar::check_intohylo( two ) );
}

TEST( InToHyLo, SeventhProblemIsRefuted )
{
    const auto& t = catalogue_task( problem::p7, "b", 50 );
    const auto sp = goal_transform( t, target::intohylo, encoding_mode::fol_standard );
    EXPECT_EQ( sp.strategy, goal_strategy::refutation );
    EXPECT_EQ( sp.goal, goal_kind::entailment );
    const auto expected = compound::conj( { t.body.children()[ 0 ], compound::negate( t.body.children()[ 1 ] ) } );
    EXPECT_EQ( refutation_body( t ), expected );
    EXPECT_TRUE( grammar::check_intohylo( sp.text ) );
}

TEST( GoalTransform, FirstProblemIsSatCheckEverywhere )
{
    const auto& t = catalogue_task( problem::p1, "base", 50 );
    for ( auto format : { target::tptp, target::ladr, target::intohylo } )
    {
        const auto sp = goal_transform( t, format, encoding_mode::fol_standard );
        EXPECT_EQ( sp.goal, goal_kind::sat_check );
        EXPECT_EQ( sp.strategy, goal_strategy::direct );
        EXPECT_FALSE( sp.text.empty() );
    }
}

TEST( GoalTransform, EighthProblemIsAConjecture )
{
    const auto& t = catalogue_task( problem::p8, "b", 50 );
    const auto fol = encode_fol( t, encoding_mode::fol_standard );
    EXPECT_EQ( fol.goal, goal_kind::entailment );
    EXPECT_TRUE( fol.axioms.empty() );
    ASSERT_TRUE( fol.conjecture.has_value() );
    EXPECT_EQ( refutation_body( t ), compound::negate( t.body ) );
}

TEST( Emitters, ConnectiveCountMatchesClauseKinds )
{
    for ( const auto& [ p, sub ] : std::vector< std::pair< problem, std::string > >{
                  { problem::p1, "base" }, { problem::p5, "b" }, { problem::p6, "b35-65" } } )
    {
        const auto& t = catalogue_task( p, sub, 50 );
        const auto& f = t.body.leaf_formula();
        std::size_t live_n = 0, safe_n = 0;
        for ( const auto& c : f.clauses() )
            ( c.kind() == clause_kind::liveness ? live_n : safe_n )++;
        const auto tptp = goal_transform( t, target::tptp, encoding_mode::fol_standard ).text;
        const auto ladr = goal_transform( t, target::ladr, encoding_mode::fol_standard ).text;
        const auto ihl = goal_transform( t, target::intohylo, encoding_mode::fol_standard ).text;
        EXPECT_EQ( count_of( tptp, "? [T]" ), live_n );
        EXPECT_EQ( count_of( tptp, "! [T]" ), safe_n );
        EXPECT_EQ( count_of( ladr, "exists x" ), live_n );
        EXPECT_EQ( count_of( ladr, "all x" ), safe_n );
        EXPECT_EQ( count_of( ihl, "<r1>" ), live_n );
        EXPECT_EQ( count_of( ihl, "[r1]" ), safe_n );
    }
}

TEST( Emitters, AtomNamesAreAnOrderPreservingBijection )
{
    const auto& t = catalogue_task( problem::p2, "base", 100 );
    const auto text = goal_transform( t, target::tptp, encoding_mode::fol_standard ).text;
    std::set< std::uint32_t > names;
    const std::regex re( "p([0-9]+)\\(T\\)" );
    for ( std::sregex_iterator it( text.begin(), text.end(), re ), end; it != end; ++it )
        names.insert( std::uint32_t( std::stoul( ( *it )[ 1 ] ) ) );
    std::set< std::uint32_t > ids;
    for ( auto a : atoms_of( t.body ) )
        ids.insert( a.id() );
    EXPECT_EQ( names, ids );
}

TEST( Canonical, RoundTripOnRandomTasks )
{
    random_stream rng( 2024 );
    const auto problems = all_problems();
    for ( int i = 0; i < 1200; ++i )
    {
        task t{ problems[ rng.below( problems.size() ) ], fmt::format( "s{}", rng.below( 9 ) ),
                std::size_t( 1 + rng.below( 3000 ) ), rng.next(),
                random_compound( rng, std::uint32_t( 1 + rng.below( 8 ) ), 3 ) };
        const auto text = emit_canonical( t );
        const auto back = parse_canonical( text );
        ASSERT_EQ( back, t ) << text;
        ASSERT_EQ( emit_canonical( back ), text );
    }
}

TEST( Canonical, RoundTripOnCatalogue )
{
    for ( const auto& t : gen::gen_catalogue( gen::default_config() ).tasks )
        ASSERT_EQ( parse_canonical( emit_canonical( t ) ), t ) << t.id();
}

TEST( Canonical, DistinctDiagnostics )
{
    const auto good = emit_canonical( sat_task( leaf( 2, { live( { 1, -2 } ) } ) ) );
    auto code_of = []( const std::string& text ) {
        try
        {
            (void) parse_canonical( text );
        }
        catch ( const canonical_error& e )
        {
            return std::optional( e.code() );
        }
        return std::optional< canonical_error::kind >();
    };

    auto zero_atom = good;
    zero_atom.replace( zero_atom.find( "[1,-2]" ), 6, "[0,-2]" );
    EXPECT_EQ( code_of( zero_atom ), canonical_error::kind::invariant_violation );

    auto dup = good;
    dup.replace( dup.find( "[1,-2]" ), 6, "[1,-1]" );
    EXPECT_EQ( code_of( dup ), canonical_error::kind::invariant_violation );

    EXPECT_EQ( code_of( good.substr( 0, good.size() / 2 ) ), canonical_error::kind::malformed );

    auto version = good;
    version.replace( version.find( "\"version\":1" ), 11, "\"version\":7" );
    EXPECT_EQ( code_of( version ), canonical_error::kind::unknown_version );

    auto extra = good;
    extra.insert( 1, "\"colour\":\"red\"," );
    EXPECT_EQ( code_of( extra ), canonical_error::kind::malformed );

    EXPECT_FALSE( code_of( good ).has_value() );
}

TEST( Canonical, FieldOrderIsStable )
{
    const auto text = emit_canonical( sat_task( leaf( 2, { live( { 1, -2 } ) } ) ) );
    EXPECT_EQ( text, "{\"format\":\"tcbench-task\",\"version\":1,\"problem\":\"P1\",\"subcase\":\"base\","
                     "\"n_clauses\":50,\"seed\":1,\"body\":{\"op\":\"leaf\",\"atom_pool_size\":2,"
                     "\"clauses\":[{\"kind\":\"L\",\"lits\":[1,-2]}]}}\n" );
}

TEST( FileNames, StemAndExtensions )
{
    const task t{ problem::p6, "a90-10", 100, 123, leaf( 1, { live( { 1 } ) } ) };
    EXPECT_EQ( file_stem( t ), "P6_a90-10_100_123" );
    EXPECT_EQ( file_name( t, target::tptp ), "P6_a90-10_100_123.p" );
    EXPECT_EQ( file_name( t, target::ladr ), "P6_a90-10_100_123.in" );
    EXPECT_EQ( file_name( t, target::intohylo ), "P6_a90-10_100_123.ihl" );
    EXPECT_EQ( file_name( t, target::canonical ), "P6_a90-10_100_123.json" );
}

TEST( Names, ParseRoundTrips )
{
    for ( auto t : { target::tptp, target::ladr, target::intohylo, target::canonical } )
        EXPECT_EQ( parse_target( to_string( t ) ), t );
    for ( auto m : { encoding_mode::fol_standard, encoding_mode::propositional } )
        EXPECT_EQ( parse_encoding_mode( to_string( m ) ), m );
    EXPECT_THROW( (void) parse_target( "dfg" ), error );
}
