#include "bll/cli.hpp"

int main(int argc, char** argv)
{
    return bll::cli::run(argc, argv);
}
