#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wpdkit/examples.hpp"
#include "wpdkit/io.hpp"

using namespace wpdkit;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(WPDKIT_TEST_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("parse_csv") {
  std::istringstream ok("0, 1\n\n1,0\n");
  CHECK(io::parse_csv(ok) == std::vector<std::vector<double>>{{0, 1}, {1, 0}});

  std::istringstream ragged("0,1,2\n1,0\n");
  try {
    io::parse_csv(ragged);
    FAIL("no error");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream word("0,1\n1,x\n");
  CHECK_THROWS_AS(io::parse_csv(word), io::ParseError);
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(io::parse_csv(empty), io::ParseError);
  std::istringstream trailing("0,1,\n");
  CHECK_THROWS_AS(io::parse_csv(trailing), io::ParseError);
}

TEST_CASE("parse_matrix_json") {
  const auto s = io::parse_matrix_json(R"({"n": 2, "d": [[0, 3], [3, 0]], "mu": [0.25, 0.75]})");
  CHECK(s.size() == 2);
  CHECK(s.space()(0, 1) == 3);
  CHECK(s.mu()[1] == 0.75);
  CHECK(io::parse_matrix_json(R"({"d": [[0]]})").mu() == std::vector<double>{1.0});
  CHECK_THROWS_AS(io::parse_matrix_json("{"), io::ParseError);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"n": 3, "d": [[0, 1], [1, 0]]})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"d": [[0, 1], [1]]})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"d": [[0, 1], [2, 0]]})"), ValidationError);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"d": [[0, 1], [1, 0]], "mu": [0.5, 0.6]})"), ValidationError);
}

TEST_CASE("load_mm_space") {
  const auto m = io::load_mm_space(write_temp("m.csv", "0,1,2\n1,0,1\n2,1,0\n"));
  CHECK(m.size() == 3);
  CHECK(m.space()(0, 2) == 2);
  const auto p = io::load_mm_space(write_temp("p.csv", "0,0\n3,4\n"));
  CHECK(p.size() == 2);
  CHECK(p.space()(0, 1) == 5);
  // a square table read as points on request
  const auto sq = io::load_mm_space(write_temp("sq.csv", "0,1\n1,0\n"), io::InputFormat::points);
  CHECK(sq.space()(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(io::load_mm_space(write_temp("bad.csv", "0,1\n1,0,3\n"), io::InputFormat::matrix), io::ParseError);
  CHECK_THROWS_AS(io::load_mm_space(write_temp("tri.csv", "0,1,5\n1,0,1\n5,1,0\n"), io::InputFormat::matrix),
                  ValidationError);
  CHECK_THROWS_AS(io::load_mm_space(std::string(WPDKIT_TEST_TMP) + "/missing.csv"), io::ParseError);
  const auto j = io::load_mm_space(write_temp("m.json", R"({"d": [[0, 2], [2, 0]]})"));
  CHECK(j.space()(1, 0) == 2);
  CHECK(io::parse_format("points") == io::InputFormat::points);
  CHECK_THROWS_AS(io::parse_format("xml"), ValidationError);
}

TEST_CASE("json export") {
  const auto wf = weighted_vr(examples::ums_x());
  const auto fj = io::to_json(wf.filtration, &wf.grid_weights);
  CHECK(fj["grid"] == nlohmann::ordered_json({0.0, 1.0, 2.0}));
  CHECK(fj["simplices"].size() == 4 + 6 + 4);
  CHECK(fj["simplices"][0]["verts"] == nlohmann::ordered_json({0}));
  CHECK(fj["weights"].size() == 3);

  const auto zj = io::to_json(zb_function(wf.filtration, 0));
  CHECK(zj["degree"] == 0);
  CHECK(zj["zb"].size() == 6);

  const auto w = weighted_pd(wf, 0);
  const auto wj = io::to_json(w);
  CHECK(wj["bars"].size() == 2);
  CHECK(wj["bars"][0]["mult"] == 2);
  CHECK(wj["weights"].size() == 6);

  const auto r = d_defo_inf_weighted(w, w);
  const auto dj = io::distance_json("d_defo", kInfinity, r);
  CHECK(dj["p"] == "inf");
  CHECK(dj["mode"] == "exact");
  CHECK(dj["certificate"].contains("coupling"));
  CHECK(io::number(-kInfinity) == "-inf");
}
