#include <string>
#include <vector>

#include "mrfm/cli.hpp"

int main(int argc, char** argv) {
    return mrfm::cli::run_command(std::vector<std::string>(argv, argv + argc));
}
