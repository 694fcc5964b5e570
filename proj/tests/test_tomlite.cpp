#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "fatigue/tomlite.hpp"
#include "fatigue/util.hpp"
#include "support.hpp"

using namespace fatigue;
using namespace testsupport;

TEST_CASE("parse scalars and comments") {
  const char* text =
      "# run settings\n"
      "name = \"demo\"  # trailing comment\n"
      "epochs = 600\n"
      "lr = 1e-3\n"
      "negative = -0.25\n"
      "verbose = true\n"
      "quiet = false\n";
  toml::Document doc = toml::parse(text, "test");
  CHECK(doc.root.require_string("name") == "demo");
  CHECK(doc.root.get_integer("epochs", 0) == 600);
  CHECK(doc.root.require_number("lr") == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(doc.root.require_number("negative") == -0.25);
  CHECK(doc.root.get_bool("verbose", false));
  CHECK_FALSE(doc.root.get_bool("quiet", true));
  CHECK_FALSE(doc.root.has("missing"));
  CHECK(doc.root.get_string("missing", "fallback") == "fallback");
  CHECK_FALSE(doc.root.get_optional_number("missing").has_value());
  CHECK(doc.root.get_optional_number("lr").has_value());
}

TEST_CASE("parse string escapes") {
  toml::Document doc = toml::parse("s = \"a\\\"b\\\\c\\nd\\te\"\n", "test");
  CHECK(doc.root.require_string("s") == "a\"b\\c\nd\te");
}

TEST_CASE("parse tables and table arrays") {
  const char* text =
      "top = 1\n"
      "[train]\n"
      "batch_size = 25\n"
      "kappa = 0.3\n"
      "[search]\n"
      "trials = 15\n"
      "[[feature]]\n"
      "name = \"a\"\n"
      "[[feature]]\n"
      "name = \"b\"\n";
  toml::Document doc = toml::parse(text, "test");
  CHECK(doc.root.require_number("top") == 1.0);
  REQUIRE(doc.find_table("train") != nullptr);
  CHECK(doc.find_table("train")->get_integer("batch_size", 0) == 25);
  CHECK(doc.find_table("search")->get_integer("trials", 0) == 15);
  CHECK(doc.find_table("nope") == nullptr);
  const auto* feats = doc.find_array("feature");
  REQUIRE(feats != nullptr);
  REQUIRE(feats->size() == 2);
  CHECK((*feats)[0].require_string("name") == "a");
  CHECK((*feats)[1].require_string("name") == "b");
}

TEST_CASE("parse arrays") {
  toml::Document doc = toml::parse("doses = [0, 10, 20, 30]\nempty = []\n", "test");
  CHECK(doc.root.get_number_array("doses") == std::vector<double>{0.0, 10.0, 20.0, 30.0});
  CHECK(doc.root.get_number_array("empty").empty());
  CHECK(doc.root.get_number_array("missing").empty());
}

TEST_CASE("parse errors carry the source and line") {
  CHECK_THROWS_WITH_AS(toml::parse("key value\n", "cfg.toml"), doctest::Contains("cfg.toml"),
                       Error);
  CHECK_THROWS_AS(toml::parse("x = \"unterminated\n", "t"), Error);
  CHECK_THROWS_AS(toml::parse("[unclosed\n", "t"), Error);
  CHECK_THROWS_AS(toml::parse("x = notaword\n", "t"), Error);
  CHECK_THROWS_AS(toml::parse("x = 1\nx = 2\n", "t"), Error);
}

TEST_CASE("typed accessors reject mismatched kinds") {
  toml::Document doc = toml::parse("s = \"text\"\nn = 4\n", "test");
  CHECK_THROWS_AS(doc.root.require_number("s"), Error);
  CHECK_THROWS_AS(doc.root.require_string("n"), Error);
  CHECK_THROWS_AS(doc.root.require_number("absent"), Error);
  CHECK_THROWS_AS(doc.root.get_number_array("s"), Error);
}

TEST_CASE("integer accessor rejects fractions") {
  toml::Document doc = toml::parse("n = 2.5\n", "test");
  CHECK_THROWS_AS(doc.root.get_integer("n", 0), Error);
}

TEST_CASE("serialize round trip") {
  toml::Document doc;
  doc.root.set("name", toml::Value::of(std::string("sweep b\"x")));
  doc.root.set("ratio", toml::Value::of(0.8));
  doc.root.set("on", toml::Value::of(true));
  doc.root.set("doses", toml::Value::of(std::vector<double>{0.0, 10.5, 30.0}));
  doc.table("train").set("epochs", toml::Value::of(600.0));
  doc.array("feature").push_back({});
  doc.array("feature").back().set("name", toml::Value::of(std::string("strain")));

  std::string text = toml::serialize(doc);
  toml::Document back = toml::parse(text, "roundtrip");
  CHECK(back.root.require_string("name") == "sweep b\"x");
  CHECK(back.root.require_number("ratio") == 0.8);
  CHECK(back.root.get_bool("on", false));
  CHECK(back.root.get_number_array("doses") == std::vector<double>{0.0, 10.5, 30.0});
  CHECK(back.find_table("train")->require_number("epochs") == 600.0);
  CHECK((*back.find_array("feature"))[0].require_string("name") == "strain");

  // serialization is deterministic
  CHECK(toml::serialize(back) == text);
}

TEST_CASE("file round trip") {
  toml::Document doc;
  doc.root.set("seed", toml::Value::of(42.0));
  std::string path = temp_path("tomlite_roundtrip.toml");
  toml::write_file(doc, path);
  toml::Document back = toml::parse_file(path);
  CHECK(back.root.require_number("seed") == 42.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(toml::parse_file(path), Error);
}
