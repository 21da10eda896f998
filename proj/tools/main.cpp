#include "cli.hpp"

#include <hitomezashi/large_stack.hpp>

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    // certificates of wide loops are deep trees
    return hitomezashi::detail::on_large_stack(
        [&] { return hitomezashi::cli::run_command_line(args, std::cout, std::cerr); });
}
