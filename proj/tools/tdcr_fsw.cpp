#include "tdcr/cli.hpp"

int main(int argc, char** argv)
{
    return tdcr::cli::run(argc, argv);
}
