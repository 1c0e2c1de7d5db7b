#include <doctest.h>

#include <array>
#include <string>

#include "oracles.hpp"
#include "seernf/errors.hpp"
#include "seernf/io.hpp"
#include "seernf/parameters.hpp"
#include "seernf/rating.hpp"
#include "seernf/synthetic.hpp"
#include "seernf/value_table.hpp"

using namespace seernf;

TEST_CASE("rating labels map to their grid position") {
  CHECK(rating_to_coordinate("VLo-") == 1.0);
  CHECK(rating_to_coordinate("EHi+") == 18.0);
  CHECK(rating_to_coordinate("Nom") == 8.0);
  CHECK(rating_to_coordinate("Hi\xE2\x88\x92") == 10.0);  // Unicode minus
}

TEST_CASE("unknown label names the token") {
  try {
    rating_to_coordinate("Medium");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("Medium") != std::string::npos);
  }
}

TEST_CASE("coordinate to nearest label, ties round down") {
  CHECK(coordinate_to_rating(8.0) == "Nom");
  CHECK(coordinate_to_rating(8.4) == "Nom");
  CHECK(coordinate_to_rating(8.5) == "Nom");
  CHECK(coordinate_to_rating(8.51) == "Nom+");
  CHECK(coordinate_to_rating(1.0) == "VLo-");
  CHECK(coordinate_to_rating(18.0) == "EHi+");
  CHECK_THROWS_AS(coordinate_to_rating(0.99), RangeError);
  CHECK_THROWS_AS(coordinate_to_rating(18.01), RangeError);
}

TEST_CASE("label order matches the literal scale and round-trips") {
  const std::array<std::string, 18> literal = {"VLo-", "VLo", "VLo+", "Low-", "Low", "Low+",
                                               "Nom-", "Nom", "Nom+", "Hi-",  "Hi",  "Hi+",
                                               "VHi-", "VHi", "VHi+", "EHi-", "EHi", "EHi+"};
  for (std::size_t i = 0; i < literal.size(); ++i) {
    CHECK(kRatingLabels[i] == literal[i]);
    CHECK(coordinate_to_rating(rating_to_coordinate(literal[i])) == literal[i]);
  }
}

TEST_CASE("parse_rating accepts labels and numbers") {
  CHECK(parse_rating("Hi+") == 12.0);
  CHECK(parse_rating("11.5") == 11.5);
  CHECK_THROWS_AS(parse_rating("19"), RangeError);
  CHECK_THROWS_AS(parse_rating("1.2.3"), ParseError);
}

TEST_CASE("canonical parameter indices") {
  CHECK(index_of(Param::ACAP) == 1);
  CHECK(index_of(Param::MODP) == 8);
  CHECK(index_of(Param::TURN) == 10);
  CHECK(index_of(Param::MULT) == 12);
  CHECK(index_of(Param::RHST) == 21);
  CHECK(index_of(Param::REUS) == 22);
  CHECK(index_of(Param::APPL) == 25);
  CHECK(index_of(Param::DISP) == 27);
  CHECK(index_of(Param::RTIM) == 30);
  CHECK(index_of(Param::TSVL) == 32);
  CHECK(index_of(Param::SECR) == 33);
  CHECK(index_of(Param::D) == 34);
  CHECK(index_of(Param::SIBR) == 35);
  CHECK(rated_params().size() == 34);
  for (int i = 1; i <= kParamCount; ++i) CHECK(parse_param(symbol(param_at(i))) == param_at(i));
  CHECK(parse_param("HOST") == Param::RHST);
  CHECK_THROWS_AS(parse_param("FOO"), ParseError);
}

TEST_CASE("index map override swaps SECR and TSVL") {
  const IndexMap swapped = IndexMap::canonical().with_index(Param::SECR, 32);
  CHECK(swapped.index(Param::SECR) == 32);
  CHECK(swapped.index(Param::TSVL) == 33);
  CHECK(swapped.param(32) == Param::SECR);
  CHECK_THROWS_AS(IndexMap::canonical().with_index(Param::ACAP, 34), RangeError);
  CHECK_THROWS_AS(IndexMap::canonical().with_index(Param::ACAP, 0), RangeError);
}

TEST_CASE("parameter values report missing symbols") {
  ParameterValues v;
  v.set(Param::ACAP, 1.0);
  CHECK(v.at(Param::ACAP) == 1.0);
  try {
    (void)v.at(Param::TOOL);
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK(std::string(e.what()).find("TOOL") != std::string::npos);
  }
}

TEST_CASE("validate_table: shipped tables are valid") {
  CHECK(validate_table(synthetic_table()).empty());
  CHECK(validate_table(identity_table()).empty());
}

TEST_CASE("validate_table: increasing TEST row passes") {
  ValueTable t = synthetic_table();
  Row row{};
  for (int r = 0; r < kRatingLevels; ++r) row[static_cast<std::size_t>(r)] = 0.8 + 0.6 * r / 17.0;
  t.set_row(Param::TEST, row);
  t.set_direction(Param::TEST, Direction::increasing);
  CHECK(validate_table(t).empty());
}

TEST_CASE("validate_table: ACAP order breach names the level pair") {
  ValueTable t = synthetic_table();
  REQUIRE(t.direction(Param::ACAP) == Direction::decreasing);
  t.set_value(Param::ACAP, 11, t.value(Param::ACAP, 10) + 0.1);
  const auto v = validate_table(t);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::monotonicity);
  CHECK(v[0].param == Param::ACAP);
  CHECK(v[0].level_a == 10);
  CHECK(v[0].level_b == 11);
  CHECK(v[0].describe().find("ACAP") != std::string::npos);
}

TEST_CASE("validate_table: non-positive value is a positivity violation") {
  ValueTable t = identity_table();
  t.set_value(Param::MULT, 1, 0.0);
  const auto v = validate_table(t);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == Violation::Kind::positivity);
  CHECK(v[0].param == Param::MULT);
}

TEST_CASE("validate_table agrees with a pairwise monotonicity scan") {
  SyntheticRng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    ValueTable t = synthetic_table();
    // Perturb without repair so roughly half the rows break.
    for (Param p : rated_params()) {
      Row row = t.row(p);
      for (double& v : row) v *= rng.uniform(0.97, 1.03);
      t.set_row(p, row);
    }
    bool all_ok = true;
    for (Param p : rated_params()) all_ok = all_ok && oracle::pairwise_monotone(t.row(p), t.direction(p));
    CHECK(validate_table(t).empty() == all_ok);
  }
}

TEST_CASE("table file round trip and loader errors") {
  const ValueTable t = synthetic_table();
  const json doc = table_to_json(t, json{{"note", "x"}});
  CHECK(table_from_json(doc) == t);

  json missing_level = doc;
  missing_level["parameters"][3]["values"].erase(0);
  CHECK_THROWS_AS(table_from_json(missing_level), ParseError);

  json missing_param = doc;
  missing_param["parameters"].erase(5);
  CHECK_THROWS_AS(table_from_json(missing_param), ParseError);

  json duplicate = doc;
  duplicate["parameters"].push_back(doc["parameters"][0]);
  CHECK_THROWS_AS(table_from_json(duplicate), ParseError);

  json bad_dir = doc;
  bad_dir["parameters"][0]["direction"] = "sideways";
  CHECK_THROWS_AS(table_from_json(bad_dir), ParseError);

  CHECK_THROWS_AS(load_table("/nonexistent/table.json"), IoError);
}
