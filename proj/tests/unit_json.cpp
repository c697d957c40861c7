#include <doctest.h>

#include "ncr/json_io.hpp"
#include "support.hpp"

using namespace ncr;

TEST_CASE("pencil JSON round trip") {
  for (const char* name : {"example1_pencil.json", "example3_pencil.json", "kernel_step_pencil.json", "zero_pencil.json"}) {
    const LinearPencil l = test::load_pencil(name);
    const LinearPencil back = io::pencil_from_json(io::parse_json(io::to_json(l).dump()));
    CHECK(back.field == l.field);
    CHECK(back.g == l.g);
    REQUIRE(back.coeffs.size() == l.coeffs.size());
    for (std::size_t j = 0; j < l.coeffs.size(); ++j) CHECK(back.coeffs[j] == l.coeffs[j]);
  }
}

TEST_CASE("point JSON round trip and validation") {
  const MatrixPoint x = random_selfadjoint_point(2, 3, Field::Complex, 5);
  const MatrixPoint y = io::point_from_json(io::parse_json(io::to_json(x).dump()));
  CHECK(y.n == 3);
  for (int j = 0; j < 2; ++j) CHECK(y.mats[j] == x.mats[j]);
  CHECK_THROWS_AS(io::point_from_json(io::read_json_file(test::fixture("bad_point.json"))), InputError);
  const MatrixPoint p = io::point_from_json(io::read_json_file(test::fixture("example3_point.json")));
  CHECK(p.mats[0](0, 1) == Scalar(1.0, 1.0));
}

TEST_CASE("realization JSON round trip") {
  const RationalExpr e = parse("inv(1 + x1*x1)*x2", 2, Field::Real);
  const Realization r = minimize(build(e, {0.0, 0.0}));
  const Realization s = io::realization_from_json(io::parse_json(io::to_json(r).dump()));
  const MatrixPoint x = random_selfadjoint_point(2, 2, Field::Real, 9);
  CHECK((*eval_realization(r, x) - *eval_realization(s, x)).norm() == 0.0);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(io::parse_json("{ not json"), InputError);
  CHECK_THROWS_AS(io::pencil_from_json(io::parse_json(R"({"field":"Q","g":0,"d":1,"e":1,"coeffs":[[[1]]]})")), InputError);
  CHECK_THROWS_AS(io::pencil_from_json(io::parse_json(R"({"field":"R","g":1,"d":1,"e":1,"coeffs":[[[1]]]})")), InputError);
  CHECK_THROWS_AS(io::read_json_file(test::fixture("missing.json")), InputError);
}

TEST_CASE("negative zero is written as zero") {
  Mat m(1, 1);
  m(0, 0) = -0.0;
  CHECK(io::to_json(m, Field::Real).dump() == "[[0.0]]");
}
