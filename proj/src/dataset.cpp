#include "bglfrps/dataset.hpp"

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bglfrps {

const std::vector<BivariatePair>& embedded_football_pairs() {
  static const std::vector<BivariatePair> pairs = {
      {2.05, 3.98},   {9.05, 9.05},   {0.85, 0.85},  {3.43, 3.43},
      {7.78, 7.78},   {10.57, 14.28}, {7.05, 7.05},  {2.58, 2.58},
      {7.23, 9.68},   {6.85, 34.58},  {32.45, 42.35}, {8.53, 14.57},
      {31.13, 49.88}, {14.58, 20.57}, {5.78, 25.98}, {13.80, 49.75},
      {7.25, 7.25},   {4.25, 4.25},   {1.65, 1.65},  {6.42, 15.08},
      {4.22, 9.48},   {15.53, 15.53}, {2.90, 2.90},  {7.02, 7.02},
      {6.42, 6.42},   {8.98, 8.98},   {10.15, 10.15}, {8.87, 8.87},
      {10.40, 10.25}, {2.98, 2.98},   {3.88, 6.43},  {0.75, 0.75},
      {11.63, 17.37}, {1.38, 1.38},   {10.53, 10.53}, {12.13, 12.13},
      {14.58, 14.58}, {11.82, 11.82}, {5.52, 11.27}, {19.65, 10.70},
      {17.83, 17.83}, {10.85, 38.07}};
  return pairs;
}

std::vector<BivariatePair> load_csv_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<BivariatePair> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (auto& ch : line) {
      if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream row(line);
    std::string t1, t2;
    if (!(row >> t1)) continue;  // blank line
    if (!(row >> t2)) throw CsvError(lineno, "expected two columns");
    double y1, y2;
    try {
      std::size_t p1 = 0, p2 = 0;
      y1 = std::stod(t1, &p1);
      y2 = std::stod(t2, &p2);
      if (p1 != t1.size() || p2 != t2.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      if (lineno == 1 && pairs.empty()) continue;  // header row
      throw CsvError(lineno, "non-numeric value");
    }
    pairs.push_back({y1, y2});
  }
  if (pairs.empty()) throw CsvError(lineno, "no data rows");
  return pairs;
}

std::vector<BivariatePair> scale_pairs(std::vector<BivariatePair> pairs,
                                       double scale) {
  if (!(scale > 0.0)) throw std::domain_error("scale must be > 0");
  for (auto& p : pairs) {
    p.y1 *= scale;
    p.y2 *= scale;
  }
  return pairs;
}

void write_csv_pairs(std::ostream& out,
                     const std::vector<BivariatePair>& pairs) {
  out << "y1,y2\n";
  for (const auto& p : pairs) out << p.y1 << ',' << p.y2 << '\n';
}

}  // namespace bglfrps
