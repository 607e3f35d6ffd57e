#include "almab/multiplicity.hpp"
#include "almab/selftest.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace almab;

namespace
{

MultiplicityFunction single(Complex mu, int size, int mult) { return MultiplicityFunction({{mu, size, mult}}); }

using gen::random_aleph;

} // namespace

TEST(Multiplicity, DimV)
{
  EXPECT_EQ(dim_v(single(0.0, 2, 1)), 2);
  EXPECT_EQ(dim_v(single(Complex(0, 1), 1, 2)), 2);
  EXPECT_EQ(dim_v(MultiplicityFunction({{1.0, 2, 1}, {0.0, 1, 1}})), 3);
}

TEST(Multiplicity, BuildJordan)
{
  const CMatrix n2 = build_jordan(single(0.0, 2, 1)).entries();
  CMatrix expected(2, 2);
  expected << 0, 1, 0, 0;
  EXPECT_EQ(n2, expected);

  const CMatrix diag = build_jordan(single(Complex(0, 1), 1, 2)).entries();
  EXPECT_EQ(diag, (Complex(0, 1) * CMatrix::Identity(2, 2)).eval());

  // canonical order puts mu = 0 before mu = 1
  const JordanMatrix mixed = build_jordan(MultiplicityFunction({{1.0, 2, 1}, {0.0, 1, 1}}));
  CMatrix m(3, 3);
  m << 0, 0, 0, 0, 1, 1, 0, 0, 1;
  EXPECT_EQ(mixed.entries(), m);
  ASSERT_EQ(mixed.layout().size(), 2u);
  EXPECT_EQ(mixed.layout()[1].offset, 1);
}

TEST(Multiplicity, CanonicalOrderMergesDuplicates)
{
  const MultiplicityFunction a({{1.0, 1, 1}, {Complex(0, 2), 2, 1}, {1.0, 1, 2}, {Complex(0, -1), 1, 1}});
  ASSERT_EQ(a.blocks().size(), 3u);
  EXPECT_EQ(a.blocks()[0].mu, Complex(0, -1));
  EXPECT_EQ(a.blocks()[1].mu, Complex(0, 2));
  EXPECT_EQ(a.blocks()[2].mu, Complex(1.0));
  EXPECT_EQ(a.blocks()[2].mult, 3);
  EXPECT_EQ(dim_v(a), 6);
}

TEST(Multiplicity, IsAbelian)
{
  EXPECT_TRUE(is_abelian(single(0.0, 1, 3)));
  EXPECT_FALSE(is_abelian(single(0.0, 2, 1)));
  EXPECT_FALSE(is_abelian(single(1.0, 1, 1)));
}

TEST(Multiplicity, JordanExpExamples)
{
  const JordanMatrix n2 = build_jordan(single(0.0, 2, 1));
  CMatrix expected(2, 2);
  expected << 1, 3, 0, 1;
  EXPECT_LE(max_abs(jordan_exp(n2, 3.0) - expected), 1e-15);
  EXPECT_LE(max_abs(oracle::dense_exp(3.0 * n2.entries()) - expected), 1e-13);

  const JordanMatrix one = build_jordan(single(1.0, 1, 1));
  EXPECT_NEAR(std::abs(jordan_exp(one, std::log(2.0))(0, 0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(oracle::dense_exp(std::log(2.0) * one.entries())(0, 0) - 2.0), 0.0, 1e-14);

  for (const auto & entry : standard_battery()) {
    const JordanMatrix J = build_jordan(entry.aleph);
    EXPECT_EQ(jordan_exp(J, 0.0), CMatrix::Identity(J.dim(), J.dim()).eval());
  }
}

TEST(Multiplicity, JordanExpMatchesDenseOracle)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const JordanMatrix J = build_jordan(random_aleph(rng, 8));
    const Complex t(unit(rng), unit(rng));
    worst = std::max(worst, max_abs(jordan_exp(J, t) - oracle::dense_exp(t * J.entries())));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Multiplicity, JordanExpProperties)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const JordanMatrix J = build_jordan(random_aleph(rng, 8));
    const Complex t(unit(rng), unit(rng));
    const Complex s(unit(rng), unit(rng));
    const CMatrix Et = jordan_exp(J, t);
    // one-parameter group
    EXPECT_LE(max_abs(Et * jordan_exp(J, s) - jordan_exp(J, t + s)), 1e-12 * std::max(1.0, max_abs(Et) * 64));
    // inverse
    EXPECT_LE(max_abs(Et * jordan_exp(J, -t) - CMatrix::Identity(J.dim(), J.dim())), 1e-12 * 64);
    // det e^{tJ} = e^{t tr J}
    const Complex det = Et.determinant();
    const Complex expected = std::exp(t * J.trace());
    EXPECT_LE(std::abs(det - expected), 1e-10 * std::abs(expected));
    // J commutes with e^{tJ}
    EXPECT_LE(max_abs(J.entries() * Et - Et * J.entries()), 1e-12 * std::max(1.0, max_abs(Et)));
  }
}

TEST(Multiplicity, ParseSpec)
{
  const auto aleph = parse_spec(R"({"blocks":[{"mu":[0,0],"size":2,"mult":1}]})");
  EXPECT_EQ(aleph, single(0.0, 2, 1));
}

TEST(Multiplicity, ParseErrorsCarryFieldPath)
{
  auto message = [](const char * text) {
    try {
      parse_spec(text);
    } catch (const ParseError & e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(R"({"blocks":[{"mu":[0,0],"size":0,"mult":1}]})"), "blocks[0].size: size must be \xe2\x89\xa5 1");
  EXPECT_EQ(message(R"({"blocks":[{"mu":[0,0],"size":1,"mult":1},{"mu":[0,0],"size":1,"mult":0}]})"),
            "blocks[1].mult: mult must be \xe2\x89\xa5 1");
  EXPECT_EQ(message(R"({"blocks":[{"mu":[0],"size":1,"mult":1}]})"), "blocks[0].mu: expected [re, im]");
  EXPECT_EQ(message(R"({"blocks":[{"size":1,"mult":1}]})"), "blocks[0].mu: missing field");
  EXPECT_EQ(message(R"({"blocks":[]})"), "blocks: at least one block is required");
  EXPECT_EQ(message(R"({"blocks":[{"mu":[0,0],"size":1.5,"mult":1}]})"), "blocks[0].size: size must be an integer");
  EXPECT_NE(message(R"({"blocks":[)").find("malformed JSON"), std::string::npos);
  // JSON has no literal for infinity; an overflowing literal is still rejected
  EXPECT_NE(message(R"({"blocks":[{"mu":[1e999,0],"size":1,"mult":1}]})"), "no error");
}

TEST(Multiplicity, NonFiniteEigenvalueRejected)
{
  EXPECT_THROW(single(Complex(std::nan(""), 0), 1, 1), ParseError);
}

TEST(Multiplicity, SerializeRoundTrip)
{
  // serialize(parse(s)) equals the canonical form of s, and is a fixed point.
  const std::string messy =
      R"({"blocks":[{"mu":[1,0],"size":1,"mult":1},{"mu":[0,6.283185307179586],"size":1,"mult":2},{"mu":[1,0],"size":1,"mult":1}]})";
  const std::string canonical = serialize_spec(parse_spec(messy));
  EXPECT_EQ(canonical,
            R"({"blocks":[{"mu":[0,6.2831853071795862],"size":1,"mult":2},{"mu":[1,0],"size":1,"mult":2}]})");
  EXPECT_EQ(serialize_spec(parse_spec(canonical)), canonical);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const MultiplicityFunction a = random_aleph(rng, 8);
    EXPECT_EQ(parse_spec(serialize_spec(a)), a);
  }
}
