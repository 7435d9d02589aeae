#include <gtest/gtest.h>

#include <random>

#include "cover_census/series.hpp"
#include "test_support.hpp"

namespace cover_census {
namespace {

EgfSeries poly(std::size_t degree, std::vector<Rational> c) { return EgfSeries(degree, std::move(c)); }

EgfSeries random_series(std::mt19937_64& rng, std::size_t degree, bool zero_constant) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  EgfSeries out(degree);
  for (std::size_t k = zero_constant ? 1 : 0; k <= degree; ++k) out[k] = ratio(num(rng), den(rng));
  return out;
}

TEST(SeriesMul, Examples) {
  EXPECT_EQ(series_mul(poly(2, {1, 1}), poly(2, {1, -1})), poly(2, {1, 0, -1}));
  EXPECT_EQ(series_mul(poly(1, {0, 1}), poly(1, {0, 1})), poly(1, {0, 0}));
  EXPECT_EQ(series_mul(poly(2, {1, 1, Rational(1, 2)}), poly(2, {1, 1})), poly(2, {1, 2, Rational(3, 2)}));
}

TEST(SeriesMul, RejectsMismatchedDegrees) {
  EXPECT_THROW(series_mul(EgfSeries(2), EgfSeries(3)), std::invalid_argument);
}

TEST(SeriesMul, AgreesWithTermByTermProduct) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_series(rng, 9, false);
    const auto b = random_series(rng, 9, false);
    const auto expected = testing::naive_product({a.coefficients().begin(), a.coefficients().end()},
                                                 {b.coefficients().begin(), b.coefficients().end()}, 9);
    EXPECT_EQ(series_mul(a, b), EgfSeries(9, expected));
  }
}

TEST(SeriesExp, Examples) {
  EXPECT_EQ(series_exp(EgfSeries::monomial(3, 1)), poly(3, {1, 1, Rational(1, 2), Rational(1, 6)}));
  EXPECT_EQ(series_exp(EgfSeries(5)), EgfSeries::constant(5, 1));
  EXPECT_EQ(series_exp(poly(3, {0, 1, 0, Rational(-1, 6)})), poly(3, {1, 1, Rational(1, 2), 0}));
}

TEST(SeriesExp, RejectsNonzeroConstantTerm) {
  EXPECT_THROW(series_exp(EgfSeries::constant(3, 1)), std::invalid_argument);
}

TEST(SeriesExp, ExpTimesExpOfNegationIsOne) {
  std::mt19937_64 rng(11);
  for (std::size_t degree : {0U, 1U, 4U, 10U}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_series(rng, degree, true);
      EXPECT_EQ(series_mul(series_exp(a), series_exp(-a)), EgfSeries::constant(degree, 1)) << "degree " << degree;
    }
  }
}

TEST(SeriesCompose, Examples) {
  const auto shift = exp_minus_one(3);
  EXPECT_EQ(series_compose(EgfSeries::monomial(3, 2), shift), poly(3, {0, 0, 1, 1}));
  const auto f = poly(4, {3, -1, Rational(2, 7), 5, 1});
  EXPECT_EQ(series_compose(f, EgfSeries::monomial(4, 1)), f);
  EXPECT_EQ(series_compose(poly(2, {1, 1}), exp_minus_one(2)), poly(2, {1, 1, Rational(1, 2)}));
}

TEST(SeriesCompose, RejectsInnerConstantAndMismatch) {
  EXPECT_THROW(series_compose(EgfSeries(3), EgfSeries::constant(3, 1)), std::invalid_argument);
  EXPECT_THROW(series_compose(EgfSeries(3), EgfSeries(4)), std::invalid_argument);
}

TEST(SeriesCompose, IsAssociative) {
  std::mt19937_64 rng(3);
  for (std::size_t degree = 1; degree <= 8; ++degree) {
    const auto f = random_series(rng, degree, false);
    const auto g = random_series(rng, degree, true);
    const auto h = random_series(rng, degree, true);
    EXPECT_EQ(series_compose(series_compose(f, g), h), series_compose(f, series_compose(g, h))) << degree;
  }
}

TEST(EgfCoefficient, Examples) {
  const auto e = series_exp(EgfSeries::monomial(5, 1));
  EXPECT_EQ(egf_coefficient(e, 3), 1);
  EXPECT_EQ(egf_coefficient(series_exp(exp_minus_one(5)), 5), 52);
  EXPECT_EQ(egf_coefficient(EgfSeries::monomial(2, 2, Rational(1, 2)), 2), 1);
  EXPECT_THROW(egf_coefficient(e, 6), std::out_of_range);
}

TEST(EgfCoefficient, BellGeneratingFunctionReproducesBellNumbers) {
  const auto b = series_exp(exp_minus_one(16));
  for (std::size_t n = 0; n <= 16; ++n) EXPECT_EQ(egf_coefficient(b, n), Rational(bell(n))) << n;
}

TEST(EgfSeries, FromSequenceRoundTrips) {
  const std::vector<Natural> seq{1, 1, 2, 5, 15, 52};
  const auto s = EgfSeries::from_sequence(5, seq);
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(egf_coefficient(s, n), Rational(seq[n]));
}

TEST(Bivariate, ProductTruncatesBothDegrees) {
  BivariateSeries a(1, 2), b(1, 2);
  a.at(0, 0) = 1;
  a.at(1, 1) = 2;
  b.at(0, 0) = 3;
  b.at(0, 2) = 1;
  b.at(1, 1) = Rational(1, 2);
  const auto p = series_mul(a, b);
  EXPECT_EQ(p.at(0, 0), 3);
  EXPECT_EQ(p.at(0, 2), 1);
  EXPECT_EQ(p.at(1, 1), Rational(13, 2));  // 1*(1/2) + 2*3
  EXPECT_EQ(p.at(1, 2), 0);                // x^2 y^2 from (x y)(x y) is truncated in x
  EXPECT_THROW(series_mul(a, BivariateSeries(2, 2)), std::invalid_argument);
}

TEST(Bivariate, ExpMatchesProductOfUnivariateExps) {
  // exp(-y - x y^2 / 2) = e^{-y} e^{-x y^2/2}: coefficient of x^i y^j is
  // (-1/2)^i / i! * (-1)^(j-2i) / (j-2i)! for j >= 2i.
  BivariateSeries f(3, 6);
  f.at(0, 1) = -1;
  f.at(1, 2) = Rational(-1, 2);
  const auto e = series_exp(f);
  for (std::size_t i = 0; i <= 3; ++i)
    for (std::size_t j = 0; j <= 6; ++j) {
      Rational expected = 0;
      if (j >= 2 * i) {
        const std::size_t rest = j - 2 * i;
        expected = ratio(((i + rest) % 2 ? -1 : 1), pow2(i) * factorial(i) * factorial(rest));
      }
      EXPECT_EQ(e.at(i, j), expected) << i << "," << j;
    }
  EXPECT_THROW(series_exp(BivariateSeries(1, 1) + [] {
                 BivariateSeries c(1, 1);
                 c.at(0, 0) = 1;
                 return c;
               }()),
               std::invalid_argument);
}

}  // namespace
}  // namespace cover_census
