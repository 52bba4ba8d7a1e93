#include <exception>
#include <iostream>
#include <vector>

#include "../src/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto parsed = mcast::cli::parse_args(args);
        return mcast::cli::dispatch(parsed);
    } catch (const mcast::cli::UsageError& e) {
        (e.exit_code == 0 ? std::cout : std::cerr) << e.what() << std::endl;
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
