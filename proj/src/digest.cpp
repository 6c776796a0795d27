#include "tcb/core.hpp"

#include <array>

#include <fmt/core.h>
#include <openssl/evp.h>

namespace tcb
{

std::string sha256_hex( std::string_view bytes )
{
    std::array< unsigned char, EVP_MAX_MD_SIZE > md{};
    unsigned int len = 0;
    if ( EVP_Digest( bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr ) != 1 )
        throw error( "SHA-256 digest failed" );

    std::string hex;
    hex.reserve( len * 2 );
    for ( unsigned int i = 0; i < len; ++i )
        hex += fmt::format( "{:02x}", md[ i ] );
    return hex;
}

} // namespace tcb
