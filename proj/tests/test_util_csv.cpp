#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>

#include "fatigue/csv.hpp"
#include "fatigue/util.hpp"
#include "support.hpp"

using namespace fatigue;
using namespace testsupport;

TEST_CASE("double formatting is shortest round trip") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-3) == "0.001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");

  // parsing the text reproduces the exact bits
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1.25e-7, 3.0}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("hash primitives are stable") {
  // reference vectors for 64-bit FNV-1a
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("hello") == 0xa430d84680aabd0bULL);
  CHECK(fnv1a64("hello") == fnv1a64("hello"));
  CHECK(fnv1a64("hello") != fnv1a64("hellp"));

  // chaining equals one-shot hashing
  std::uint64_t chained = fnv1a64(std::string("world"), fnv1a64("hello "));
  CHECK(chained == fnv1a64("hello world"));
}

TEST_CASE("seed scrambling separates nearby seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(splitmix64(s));
  CHECK(seen.size() == 100);
  CHECK(splitmix64(7) == splitmix64(7));
  CHECK(splitmix64(0) != 0);
}

TEST_CASE("hex round trip") {
  CHECK(to_hex(0) == "0000000000000000");
  CHECK(to_hex(0xabcdef0123456789ULL) == "abcdef0123456789");
  CHECK(parse_hex("abcdef0123456789") == 0xabcdef0123456789ULL);
  CHECK(parse_hex(to_hex(0xdeadbeefULL)) == 0xdeadbeefULL);
  CHECK_THROWS_AS(parse_hex("xyz"), Error);
  CHECK_THROWS_AS(parse_hex(""), Error);
  CHECK_THROWS_AS(parse_hex("12 "), Error);
}

TEST_CASE("csv read and write round trip") {
  std::string path = temp_path("roundtrip.csv");
  write_csv(path, {"a", "b", "c"}, {{"1", "x", ""}, {"2.5", "", "inf"}});
  CsvTable t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"1", "x", ""});
  CHECK(t.rows[1] == std::vector<std::string>{"2.5", "", "inf"});
  CHECK(t.column("b") == 1);
  CHECK(t.column("zzz") == -1);
  std::filesystem::remove(path);
}

TEST_CASE("csv read tolerates blank lines and CRLF") {
  std::string path = temp_path("crlf.csv");
  {
    std::ofstream out(path, std::ios::binary);
    out << "a,b\r\n1,2\r\n\r\n3,4\n\n";
  }
  CsvTable t = read_csv(path);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"1", "2"});
  CHECK(t.rows[1] == std::vector<std::string>{"3", "4"});
  std::filesystem::remove(path);
}

TEST_CASE("csv rejects ragged input") {
  std::string path = temp_path("ragged.csv");
  {
    std::ofstream out(path, std::ios::binary);
    out << "a,b\n1,2,3\n";
  }
  CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains("expected 2 cells"), Error);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_csv(temp_path("does_not_exist.csv")), Error);
  CHECK_THROWS_AS(write_csv(temp_path("bad_width.csv"), {"a"}, {{"1", "2"}}), Error);
}
