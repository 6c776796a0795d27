#include "tcb/cli.hpp"

int main( int argc, char** argv )
{
    return tcb::cli::dispatch( argc, argv );
}
