#include "tcb/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <vector>

#include <fmt/core.h>

namespace tcb::grammar
{

namespace
{

enum class dialect
{
    tptp,
    ladr,
    intohylo,
};

struct token
{
    std::string text;
    std::size_t line;
};

struct syntax_error
{
    std::size_t line;
    std::string message;
};

bool ident_char( char c )
{
    return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_';
}

std::vector< token > lex( std::string_view text, dialect d )
{
    std::vector< token > out;
    std::size_t line = 1;
    std::size_t i = 0;
    while ( i < text.size() )
    {
        const char c = text[ i ];
        if ( c == '\n' )
        {
            ++line;
            ++i;
            continue;
        }
        if ( std::isspace( static_cast< unsigned char >( c ) ) )
        {
            ++i;
            continue;
        }
        if ( c == '%' && d != dialect::intohylo )
        {
            while ( i < text.size() && text[ i ] != '\n' )
                ++i;
            continue;
        }
        if ( ident_char( c ) )
        {
            const auto start = i;
            while ( i < text.size() && ident_char( text[ i ] ) )
                ++i;
            out.push_back( { std::string( text.substr( start, i - start ) ), line } );
            continue;
        }
        if ( d == dialect::intohylo && ( c == '<' || c == '[' ) )
        {
            const char close = c == '<' ? '>' : ']';
            const auto end = text.find( close, i );
            if ( end == std::string_view::npos )
                throw syntax_error{ line, fmt::format( "unterminated modality '{}'", c ) };
            out.push_back( { std::string( text.substr( i, end - i + 1 ) ), line } );
            i = end + 1;
            continue;
        }
        const auto two = text.substr( i, 2 );
        if ( ( d == dialect::tptp && two == "=>" ) || ( d != dialect::tptp && two == "->" ) )
        {
            out.push_back( { std::string( two ), line } );
            i += 2;
            continue;
        }
        if ( d == dialect::ladr && c == '-' && i + 1 < text.size() && text[ i + 1 ] == '-' )
            throw syntax_error{ line, "'--' is not a LADR operator" };
        out.push_back( { std::string( 1, c ), line } );
        ++i;
    }
    return out;
}

class parser
{
    std::vector< token > _toks;
    std::size_t _pos = 0;
    dialect _dialect;
    std::map< std::string, std::size_t > _arity;
    std::vector< std::string > _bound;

public:
    parser( std::vector< token > toks, dialect d ) : _toks{ std::move( toks ) }, _dialect{ d } {}

    void file()
    {
        switch ( _dialect )
        {
        case dialect::tptp:
            if ( at_end() )
                fail( "empty TPTP problem" );
            while ( !at_end() )
                tptp_annotated();
            break;
        case dialect::ladr:
            if ( at_end() )
                fail( "empty LADR input" );
            while ( !at_end() )
                ladr_block();
            break;
        case dialect::intohylo:
            expect( "begin" );
            formula();
            expect( "end" );
            if ( !at_end() )
                fail( fmt::format( "trailing input '{}' after end", peek() ) );
            break;
        }
    }

private:
    [[nodiscard]] bool at_end() const { return _pos >= _toks.size(); }
    [[nodiscard]] const std::string& peek() const
    {
        static const std::string eof = "<end of input>";
        return at_end() ? eof : _toks[ _pos ].text;
    }
    [[nodiscard]] std::size_t line() const
    {
        if ( _toks.empty() )
            return 1;
        return at_end() ? _toks.back().line : _toks[ _pos ].line;
    }

    [[noreturn]] void fail( const std::string& msg ) const { throw syntax_error{ line(), msg }; }

    std::string next()
    {
        if ( at_end() )
            fail( "unexpected end of input" );
        return _toks[ _pos++ ].text;
    }

    void expect( std::string_view t )
    {
        if ( peek() != t )
            fail( fmt::format( "expected '{}' but found '{}'", t, peek() ) );
        ++_pos;
    }

    bool accept( std::string_view t )
    {
        if ( !at_end() && peek() == t )
        {
            ++_pos;
            return true;
        }
        return false;
    }

    [[nodiscard]] bool is_binop( const std::string& t ) const
    {
        if ( t == "|" || t == "&" )
            return true;
        return _dialect == dialect::tptp ? t == "=>" : t == "->";
    }

    static bool is_lower_word( const std::string& t )
    {
        return !t.empty() && std::islower( static_cast< unsigned char >( t[ 0 ] ) );
    }
    static bool is_upper_word( const std::string& t )
    {
        return !t.empty() && std::isupper( static_cast< unsigned char >( t[ 0 ] ) );
    }

    void formula()
    {
        unitary();
        if ( at_end() || !is_binop( peek() ) )
            return;
        const std::string op = next();
        unitary();
        if ( op == "=>" || op == "->" )
        {
            if ( !at_end() && is_binop( peek() ) )
                fail( "implication chains need parentheses" );
            return;
        }
        while ( !at_end() && is_binop( peek() ) )
        {
            if ( peek() != op )
                fail( fmt::format( "mixed '{}' and '{}' need parentheses", op, peek() ) );
            ++_pos;
            unitary();
        }
    }

    void unitary()
    {
        const auto& t = peek();
        if ( t == "(" )
        {
            ++_pos;
            formula();
            expect( ")" );
            return;
        }
        switch ( _dialect )
        {
        case dialect::tptp: tptp_unitary(); return;
        case dialect::ladr: ladr_unitary(); return;
        case dialect::intohylo: ihl_unitary(); return;
        }
    }

    void atomic( bool variables_uppercase )
    {
        const auto name = next();
        if ( !is_lower_word( name ) )
            fail( fmt::format( "expected a predicate symbol, found '{}'", name ) );
        std::size_t arity = 0;
        if ( accept( "(" ) )
        {
            do
            {
                const auto term = next();
                ++arity;
                if ( variables_uppercase && is_upper_word( term ) )
                {
                    if ( std::find( _bound.begin(), _bound.end(), term ) == _bound.end() )
                        fail( fmt::format( "free variable '{}'", term ) );
                }
                else if ( !is_lower_word( term ) )
                    fail( fmt::format( "bad term '{}'", term ) );
                else if ( !variables_uppercase && _dialect == dialect::ladr
                          && std::find( _bound.begin(), _bound.end(), term ) == _bound.end() && term.size() == 1
                          && term[ 0 ] >= 'u' && term[ 0 ] <= 'z' )
                    fail( fmt::format( "free variable '{}'", term ) );
            } while ( accept( "," ) );
            expect( ")" );
        }
        const auto [ it, inserted ] = _arity.emplace( name, arity );
        if ( !inserted && it->second != arity )
            fail( fmt::format( "predicate '{}' used with arities {} and {}", name, it->second, arity ) );
    }

    void tptp_unitary()
    {
        if ( accept( "~" ) )
        {
            unitary();
            return;
        }
        if ( peek() == "!" || peek() == "?" )
        {
            ++_pos;
            expect( "[" );
            std::size_t added = 0;
            do
            {
                const auto var = next();
                if ( !is_upper_word( var ) )
                    fail( fmt::format( "quantified variable '{}' must start uppercase", var ) );
                _bound.push_back( var );
                ++added;
            } while ( accept( "," ) );
            expect( "]" );
            expect( ":" );
            unitary();
            _bound.resize( _bound.size() - added );
            return;
        }
        atomic( true );
    }

    void ladr_unitary()
    {
        if ( accept( "-" ) )
        {
            unitary();
            return;
        }
        if ( peek() == "all" || peek() == "exists" )
        {
            ++_pos;
            const auto var = next();
            if ( !is_lower_word( var ) )
                fail( fmt::format( "bad quantified variable '{}'", var ) );
            _bound.push_back( var );
            unitary();
            _bound.pop_back();
            return;
        }
        atomic( false );
    }

    void ihl_unitary()
    {
        if ( at_end() )
            fail( "unexpected end of input" );
        const auto& t = peek();
        if ( t == "~" || t == "<r1>" || t == "[r1]" )
        {
            ++_pos;
            unitary();
            return;
        }
        if ( t.front() == '<' || t.front() == '[' )
            fail( fmt::format( "unknown modality '{}'", t ) );
        const auto name = next();
        if ( name == "true" || name == "false" )
            return;
        if ( name.size() < 2 || name[ 0 ] != 'p'
             || !std::all_of( name.begin() + 1, name.end(), []( char c ) { return std::isdigit( (unsigned char) c ); } ) )
            fail( fmt::format( "expected a proposition p<N>, found '{}'", name ) );
    }

    void tptp_annotated()
    {
        expect( "fof" );
        expect( "(" );
        const auto name = next();
        if ( !is_lower_word( name ) && !std::isdigit( (unsigned char) name[ 0 ] ) )
            fail( fmt::format( "bad formula name '{}'", name ) );
        expect( "," );
        const auto role = next();
        static const std::set< std::string > roles{ "axiom", "hypothesis", "conjecture", "negated_conjecture" };
        if ( !roles.contains( role ) )
            fail( fmt::format( "unknown role '{}'", role ) );
        expect( "," );
        formula();
        expect( ")" );
        expect( "." );
    }

    void ladr_block()
    {
        expect( "formulas" );
        expect( "(" );
        const auto list = next();
        if ( list != "sos" && list != "goals" && list != "assumptions" )
            fail( fmt::format( "unknown list '{}'", list ) );
        expect( ")" );
        expect( "." );
        while ( peek() != "end_of_list" )
        {
            if ( at_end() )
                fail( "missing end_of_list" );
            formula();
            expect( "." );
        }
        expect( "end_of_list" );
        expect( "." );
    }
};

check_result run( std::string_view text, dialect d )
{
    try
    {
        parser p{ lex( text, d ), d };
        p.file();
        return {};
    }
    catch ( const syntax_error& e )
    {
        return { false, e.line, e.message };
    }
}

} // namespace

check_result check_tptp( std::string_view text )
{
    return run( text, dialect::tptp );
}

check_result check_ladr( std::string_view text )
{
    return run( text, dialect::ladr );
}

check_result check_intohylo( std::string_view text )
{
    return run( text, dialect::intohylo );
}

check_result check( emit::target format, std::string_view text )
{
    switch ( format )
    {
    case emit::target::tptp: return check_tptp( text );
    case emit::target::ladr: return check_ladr( text );
    case emit::target::intohylo: return check_intohylo( text );
    case emit::target::canonical:
        try
        {
            (void) emit::parse_canonical( text );
            return {};
        }
        catch ( const error& e )
        {
            return { false, 1, e.what() };
        }
    }
    return { false, 0, "unknown target" };
}

} // namespace tcb::grammar
