#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bglfrps/bglfr.hpp"

namespace bglfrps {

// Raised with a 1-based line number when a CSV row cannot be parsed.
struct CsvError : std::runtime_error {
  int line;
  CsvError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
};

// The 42 first-score time pairs (in minutes) embedded as recorded, two
// decimals each.
const std::vector<BivariatePair>& embedded_football_pairs();

// Two numeric columns y1,y2; comma or whitespace delimited, optional header.
std::vector<BivariatePair> load_csv_pairs(const std::string& path);

std::vector<BivariatePair> scale_pairs(std::vector<BivariatePair> pairs,
                                       double scale);

void write_csv_pairs(std::ostream& out,
                     const std::vector<BivariatePair>& pairs);

}  // namespace bglfrps
