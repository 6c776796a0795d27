#pragma once

#include <cstdint>
#include <string_view>

namespace tcb
{

// SplitMix64 (Steele, Lea, Flood 2014). The state advances by the golden
// gamma 0x9E3779B97F4A7C15 and each output is the state passed through
// mix64 below. Every derived quantity uses only 64-bit integer arithmetic,
// so streams are reproducible in any language.
[[nodiscard]] constexpr std::uint64_t mix64( std::uint64_t z )
{
    z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ULL;
    z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBULL;
    return z ^ ( z >> 31 );
}

// FNV-1a, 64-bit.
[[nodiscard]] constexpr std::uint64_t fnv1a64( std::string_view text )
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for ( unsigned char c : text )
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Child seed for a labelled sub-stream: mix64(base ^ mix64(fnv1a64(label))).
[[nodiscard]] constexpr std::uint64_t derive_seed( std::uint64_t base, std::string_view label )
{
    return mix64( base ^ mix64( fnv1a64( label ) ) );
}

class random_stream
{
    std::uint64_t _state;

public:
    explicit random_stream( std::uint64_t seed ) : _state{ seed } {}

    std::uint64_t next()
    {
        _state += 0x9E3779B97F4A7C15ULL;
        return mix64( _state );
    }

    // Uniform in [0, bound). Rejects draws below (2^64 - bound) mod bound,
    // then reduces modulo bound.
    std::uint64_t below( std::uint64_t bound )
    {
        const std::uint64_t threshold = ( 0 - bound ) % bound;
        for ( ;; )
        {
            const std::uint64_t x = next();
            if ( x >= threshold )
                return x % bound;
        }
    }

    // Uniform in [0, 1) with 53 bits: (next() >> 11) * 2^-53.
    double unit()
    {
        return double( next() >> 11 ) * 0x1.0p-53;
    }

    bool bernoulli( double p ) { return unit() < p; }
};

} // namespace tcb
