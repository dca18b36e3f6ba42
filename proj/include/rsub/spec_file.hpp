#pragma once

// Line-oriented substitution files:
//
//   # random period doubling
//   alphabet: a b
//   a -> ab | ba
//   b -> aa
//
// Multi-character letters are written dot-separated inside images
// ("x1.x2"). Errors carry the 1-based line number.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rsub/core.hpp"

namespace rsub {

  struct ParsedSpec {
    RandomSubstitution       substitution;
    std::vector<std::string> warnings;
  };

  // Throws ParseError.
  ParsedSpec parse_spec(std::string_view text);

  // Throws IoError when the file cannot be read, ParseError otherwise.
  ParsedSpec parse_spec_file(std::filesystem::path const& path);

}  // namespace rsub
