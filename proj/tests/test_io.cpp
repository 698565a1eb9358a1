#include <gtest/gtest.h>

#include <sstream>

#include "fqlab/io.hpp"

using namespace fqlab;
using fqlab::io::json;

TEST(Io, PolynomialRoundTrip) {
  const LaurentPoly p(2, {{{1, -1}, Complex(0.5, -0.25)}, {{0, 0}, 1.0}});
  const LaurentPoly q = io::poly_from_json(io::poly_to_json(p));
  EXPECT_EQ(p, q);
}

TEST(Io, PolynomialSchemaErrors) {
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"terms": []})")), InputError);
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"arity": 2, "terms": [{"exp": [1], "re": 1}]})")), InputError);
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"arity": 1, "terms": [{"exp": [1], "re": 0, "im": 0}]})")), InputError);
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"arity": 1, "terms": [{"exp": [1], "re": 1}, {"exp": [1], "re": 2}]})")),
               InputError);
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"arity": 1, "terms": [{"exp": [0.5], "re": 1}]})")), InputError);
}

TEST(Io, MatrixRoundTripAndErrors) {
  const IntMatrix a{{2, 1}, {0, 3}};
  EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(a)), a);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 2, "cols": 2, "data": [[1, 2]]})")), InputError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": 1, "cols": 1, "data": [[2000000]]})")), InputError);
}

TEST(Io, DirectionAndReals) {
  const Direction d = io::direction_from_json(json::parse(R"({"entries": [1, 1.4142135623730951]})"));
  EXPECT_EQ(d.entries.size(), 2u);
  EXPECT_EQ(io::parse_reals("1,1.4142135623730951", "ell")[1], 1.4142135623730951);
  EXPECT_THROW(io::parse_reals("1,x", "ell"), InputError);
}

TEST(Io, SeventeenDigits) {
  EXPECT_EQ(io::fmt_real(0.1), "0.10000000000000001");
  std::ostringstream os;
  io::CsvWriter w(os);
  w.header({"t", "multiplicity"});
  w.row(0.5, 1);
  EXPECT_EQ(os.str(), "t,multiplicity\n0.5,1\n");
}

TEST(Io, ConfigHashIsStable) {
  const json a = {{"seed", 42}, {"tol", 1e-10}};
  const json b = {{"tol", 1e-10}, {"seed", 42}};
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
  EXPECT_NE(io::config_hash(a), io::config_hash(json{{"seed", 43}, {"tol", 1e-10}}));
  EXPECT_EQ(io::hex64(io::fnv1a("")), "cbf29ce484222325");
}
