#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "irtpart/response_matrix.hpp"

using namespace irtpart;

static ResponseMatrix small_matrix() {
  ResponseMatrix m;
  m.model_ids = {"m0", "m1", "m2"};
  m.item_ids = {"a", "b", "c", "d"};
  m.cells = {1, 0, 1, 1,   //
             0, 0, 1, 1,   //
             1, 1, 1, 0};  //
  return m;
}

TEST_CASE("row-major indexing", "[matrix]") {
  const auto m = small_matrix();
  CHECK(m.models() == 3);
  CHECK(m.items() == 4);
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(1, 0) == 0);
  CHECK(m.at(2, 3) == 0);
}

TEST_CASE("export then import reproduces the matrix", "[matrix]") {
  const auto m = small_matrix();
  const std::string text = export_matrix(m);
  CHECK(text == "model_id,a,b,c,d\nm0,1,0,1,1\nm1,0,0,1,1\nm2,1,1,1,0\n");
  const auto back = import_matrix(text);
  CHECK(back.model_ids == m.model_ids);
  CHECK(back.item_ids == m.item_ids);
  CHECK(back.cells == m.cells);
  CHECK(export_matrix(back) == text);  // fixed point
}

TEST_CASE("import rejects malformed input", "[matrix]") {
  CHECK_THROWS_AS(import_matrix("wrong,a\nm0,1\n"), DataError);           // bad header
  CHECK_THROWS_AS(import_matrix("model_id\nm0\n"), DataError);            // no items
  CHECK_THROWS_AS(import_matrix("model_id,a\nm0,1\nm0,0\n"), DataError);  // dup model
  CHECK_THROWS_AS(import_matrix("model_id,a,a\nm0,1,0\n"), DataError);    // dup item
  CHECK_THROWS_AS(import_matrix("model_id,a,b\nm0,1\n"), DataError);      // ragged
  CHECK_THROWS_AS(import_matrix("model_id,a\nm0,2\n"), DataError);        // non-binary
  CHECK_THROWS_AS(import_matrix("model_id,a\nm0,0.5\n"), DataError);
  CHECK_THROWS_AS(import_matrix("model_id,a\nm0,true\n"), DataError);
}

TEST_CASE("accuracies and proportions are row and column means", "[matrix]") {
  const auto m = small_matrix();
  const auto acc = model_accuracies(m);
  REQUIRE(acc.size() == 3);
  CHECK(acc[0] == Catch::Approx(0.75));
  CHECK(acc[1] == Catch::Approx(0.5));
  CHECK(acc[2] == Catch::Approx(0.75));
  const auto prop = item_proportions(m);
  REQUIRE(prop.size() == 4);
  CHECK(prop[0] == Catch::Approx(2.0 / 3.0));
  CHECK(prop[1] == Catch::Approx(1.0 / 3.0));
  CHECK(prop[2] == Catch::Approx(1.0));
  CHECK(prop[3] == Catch::Approx(2.0 / 3.0));
}
