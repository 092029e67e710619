#include <string>
#include <vector>

#include "qnlay/cli.hpp"

int main(int argc, char** argv) {
    qnlay::configure_logging();
    return qnlay::run_cli(std::vector<std::string>(argv, argv + argc));
}
