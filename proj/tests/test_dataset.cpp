#include "bglfrps/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

using namespace bglfrps;

namespace {

std::string temp_path(const char* name) {
  return std::string("./") + name;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("embedded scoring pairs") {
  const auto& pairs = embedded_football_pairs();
  REQUIRE(pairs.size() == 42);
  CHECK(pairs.front().y1 == doctest::Approx(2.05));
  CHECK(pairs.front().y2 == doctest::Approx(3.98));
  CHECK(pairs[1].y1 == pairs[1].y2);  // 9.05 tie
  CHECK(pairs.back().y1 == doctest::Approx(10.85));
  CHECK(pairs.back().y2 == doctest::Approx(38.07));
  for (const auto& p : pairs) {
    CHECK(p.y1 > 0.0);
    CHECK(p.y2 > 0.0);
  }
}

TEST_CASE("scaling") {
  auto scaled = scale_pairs(embedded_football_pairs(), 0.01);
  CHECK(scaled.front().y1 == doctest::Approx(0.0205));
  CHECK(scaled.size() == 42);
}

TEST_CASE("csv round trip") {
  std::string path = temp_path("roundtrip.csv");
  auto pairs = embedded_football_pairs();
  {
    std::ofstream out(path);
    write_csv_pairs(out, pairs);
  }
  auto back = load_csv_pairs(path);
  REQUIRE(back.size() == pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    CHECK(back[i].y1 == doctest::Approx(pairs[i].y1).epsilon(1e-12));
    CHECK(back[i].y2 == doctest::Approx(pairs[i].y2).epsilon(1e-12));
  }
  std::remove(path.c_str());
}

TEST_CASE("csv delimiter and header flexibility") {
  std::string path = temp_path("delims.csv");

  write_file(path, "y1,y2\n1.5,2.5\n3 4\n5\t6\n");
  auto pairs = load_csv_pairs(path);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].y1 == 1.5);
  CHECK(pairs[1].y2 == 4.0);
  CHECK(pairs[2].y1 == 5.0);

  write_file(path, "1,2\n");
  pairs = load_csv_pairs(path);
  REQUIRE(pairs.size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("csv errors carry line numbers") {
  std::string path = temp_path("bad.csv");

  write_file(path, "1,2\n3,oops\n");
  try {
    load_csv_pairs(path);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 2);
  }

  write_file(path, "1,2\n3\n");
  CHECK_THROWS_AS(load_csv_pairs(path), CsvError);

  write_file(path, "");
  CHECK_THROWS_AS(load_csv_pairs(path), CsvError);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_csv_pairs("./no_such_file.csv"), std::runtime_error);
}
