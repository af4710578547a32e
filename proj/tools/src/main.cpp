#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    const auto outcome =
        ringsphere::cli::parse_args(argc, argv, std::cout, std::cerr);
    if (!outcome.should_run) return outcome.exit_code;
    return ringsphere::cli::run(outcome.config, std::cout, std::cerr);
}
