// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/errors.hpp"

namespace lirelab {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

}  // namespace lirelab
