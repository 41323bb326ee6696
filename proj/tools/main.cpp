// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>

#include "cli_io.hpp"

int main(int argc, char** argv) {
  using namespace rsa::cli;
  try {
    const auto config = parse_args(argc, argv);
    if (!config) return 0;
    emit(run(*config), *config);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "rsa-mf: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "rsa-mf: " << e.what() << "\n";
    return 3;
  } catch (const OutputError& e) {
    std::cerr << "rsa-mf: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "rsa-mf: internal error: " << e.what() << "\n";
    return 1;
  }
}
