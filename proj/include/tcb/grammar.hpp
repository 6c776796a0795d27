#pragma once

#include "tcb/emit.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace tcb::grammar
{

// Recursive-descent recognisers for the subsets of TPTP FOF, LADR and
// InToHyLo the emitters produce. Mixed binary connectives must be
// parenthesised; TPTP variables must be bound; predicate arities must be
// consistent within a file.
struct check_result
{
    bool ok = true;
    std::size_t line = 0;
    std::string message;

    explicit operator bool() const { return ok; }
};

[[nodiscard]] check_result check_tptp( std::string_view text );
[[nodiscard]] check_result check_ladr( std::string_view text );
[[nodiscard]] check_result check_intohylo( std::string_view text );

// Dispatches on the target; canonical text is checked by parse_canonical.
[[nodiscard]] check_result check( emit::target format, std::string_view text );

} // namespace tcb::grammar
