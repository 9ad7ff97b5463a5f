#include "kgwell/cli.hpp"

int main(int argc, char** argv)
{
    return kgwell::cli::run(argc, argv);
}
