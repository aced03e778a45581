#include <vector>
#include <string>

#include "wardtrack/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wardtrack::cli::run(args);
}
