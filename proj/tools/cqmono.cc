#include <cqmono/cli.hh>

#include <iostream>

auto main(int argc, char * argv[]) -> int
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cqmono::cli::run(args, std::cout, std::cerr);
}
