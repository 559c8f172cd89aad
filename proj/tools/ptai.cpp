// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ptai/cli.hpp"

int main(int argc, char** argv) {
    return ptai::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
