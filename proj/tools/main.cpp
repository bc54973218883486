// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "sirs/cli.hpp"

int main(int argc, char** argv) { return sirs::run_cli(argc, argv, std::cout, std::cerr); }
