#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "techevo/regress.hpp"
#include "techevo/synth.hpp"
#include "test_util.hpp"

using techevo::OlsFit;
using techevo::errc;
using techevo::f_cdf;
using techevo::ols;
using techevo::t_cdf;
using testutil::code_of;

namespace {

/// Student-t density, used by the quadrature oracle below.
double t_pdf(double x, int df) {
  constexpr double kPi = 3.141592653589793238462643383279502884;
  const double v = df;
  const double ln_c = std::lgamma((v + 1) / 2) - std::lgamma(v / 2) - 0.5 * std::log(v * kPi);
  return std::exp(ln_c - (v + 1) / 2 * std::log1p(x * x / v));
}

/// Independent oracle: composite Simpson integration of the t density
/// from 0 to t, added to the symmetric half.
double t_cdf_quadrature(double t, int df) {
  const int n = 20000;  // even
  const double h = t / n;
  double acc = t_pdf(0, df) + t_pdf(t, df);
  for (int i = 1; i < n; ++i) acc += t_pdf(i * h, df) * (i % 2 ? 4.0 : 2.0);
  return 0.5 + acc * h / 3.0;
}

}  // namespace

TEST_CASE("exact line: slope 1, intercept 0, r2 1, zero residuals") {
  const std::vector<double> x{1, 2, 3};
  const OlsFit f = ols(x, x);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f.r2 == 1.0);
  CHECK(std::isinf(f.t_slope));
  CHECK(f.p_slope == 0.0);
  CHECK(std::isinf(f.f_stat));
  for (double r : f.residuals) CHECK(std::fabs(r) <= 1e-14);
}

TEST_CASE("three-point closed form: slope 1/2, intercept 1/6, r2 3/4") {
  const std::vector<double> x{0, 1, 2};
  const std::vector<double> y{0, 1, 1};
  const OlsFit f = ols(x, y);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(f.r2 == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("matches an independently computed full inference set") {
  // Reference values computed with a separate statistics package.
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> y{2.1, 2.9, 4.2, 4.8, 6.3, 6.6, 8.0, 8.1};
  const OlsFit f = ols(x, y);
  CHECK(f.slope == doctest::Approx(0.90714285714285714).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.2928571428571427).epsilon(1e-13));
  CHECK(f.se_slope == doctest::Approx(0.051672700986216014).epsilon(1e-12));
  CHECK(f.se_intercept == doctest::Approx(0.26093434939439786).epsilon(1e-12));
  CHECK(f.t_slope == doctest::Approx(17.555553315953865).epsilon(1e-12));
  CHECK(f.p_slope == doctest::Approx(2.1919497559578099e-06).epsilon(1e-9));
  CHECK(f.r2 == doctest::Approx(0.98090372803016479).epsilon(1e-13));
  CHECK(f.r2_adj == doctest::Approx(0.97772101603519224).epsilon(1e-13));
  CHECK(f.f_stat == doctest::Approx(308.19745222929873).epsilon(1e-12));
  CHECK(f.p_f == doctest::Approx(2.1919497559578099e-06).epsilon(1e-9));
  CHECK(f.resid_se == doctest::Approx(0.3348773762780301).epsilon(1e-12));
}

TEST_CASE("shifting y moves only the intercept") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{1.2, 1.9, 3.3, 3.8, 5.1};
  std::vector<double> y10 = y;
  for (double& v : y10) v += 10.0;
  const OlsFit a = ols(x, y);
  const OlsFit b = ols(x, y10);
  CHECK(b.slope == doctest::Approx(a.slope).epsilon(1e-13));
  CHECK(b.intercept == doctest::Approx(a.intercept + 10.0).epsilon(1e-13));
  CHECK(b.r2 == doctest::Approx(a.r2).epsilon(1e-13));
}

TEST_CASE("recovers any exact line on non-constant x") {
  techevo::SplitMix64 rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    const double a = (rng.next_unit() - 0.5) * 20.0;
    const double b = (rng.next_unit() - 0.5) * 8.0;
    std::vector<double> x(7), y(7);
    for (int i = 0; i < 7; ++i) {
      x[i] = rng.next_unit() * 10.0 + i;  // increasing-ish, never constant
      y[i] = a + b * x[i];
    }
    const OlsFit f = ols(x, y);
    CHECK(std::fabs(f.slope - b) <= 1e-10 * std::max(1.0, std::fabs(b)));
    CHECK(std::fabs(f.intercept - a) <= 1e-9 * std::max(1.0, std::fabs(a)));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("residuals sum to zero and f equals t squared") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<double> y{1.1, 2.3, 2.6, 4.4, 4.2, 6.8, 6.4, 8.9, 8.1};
  const OlsFit f = ols(x, y);
  const double rsum = std::accumulate(f.residuals.begin(), f.residuals.end(), 0.0);
  CHECK(std::fabs(rsum) <= 1e-9);
  CHECK(f.f_stat == doctest::Approx(f.t_slope * f.t_slope).epsilon(1e-8));
  CHECK(f.p_f == f.p_slope);
}

TEST_CASE("swapping x and y: product of slopes equals r squared") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> y{2.0, 1.8, 3.9, 4.4, 4.1, 6.5, 6.2};
  const OlsFit xy = ols(x, y);
  const OlsFit yx = ols(y, x);
  CHECK(xy.slope * yx.slope == doctest::Approx(xy.r2).epsilon(1e-9));
}

TEST_CASE("error cases") {
  CHECK(code_of([] { ols(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}); }) ==
        errc::length_mismatch);
  CHECK(code_of([] { ols(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) ==
        errc::insufficient_data);
  CHECK(code_of([] { ols(std::vector<double>{5, 5, 5, 5}, std::vector<double>{1, 2, 3, 4}); }) ==
        errc::constant_regressor);
}

TEST_CASE("constant y fitted exactly reports no significance") {
  const OlsFit f = ols(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 2, 2, 2});
  CHECK(f.slope == 0.0);
  CHECK(f.r2 == 1.0);
  CHECK(f.p_slope == 1.0);
  CHECK(f.f_stat == 0.0);
}

TEST_CASE("t cdf: symmetry point and closed forms") {
  CHECK(t_cdf(0.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t_cdf(0.0, 7) == doctest::Approx(0.5).epsilon(1e-15));
  // df=1 is the Cauchy distribution: F(1) = 3/4 exactly.
  CHECK(t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  // df=2 closed form F(t) = 1/2 + t / (2*sqrt(2+t^2)).
  const double t = std::sqrt(2.0);
  CHECK(t_cdf(t, 2) == doctest::Approx(0.5 + t / (2.0 * std::sqrt(2.0 + t * t))).epsilon(1e-12));
}

TEST_CASE("t cdf matches reference package values") {
  CHECK(t_cdf(1.3, 5) == doctest::Approx(0.87484968291466148).epsilon(1e-12));
  CHECK(t_cdf(-2.7, 30) == doctest::Approx(0.0056422332553596934).epsilon(1e-10));
}

TEST_CASE("t cdf matches a quadrature oracle") {
  for (int df : {1, 2, 5, 12, 40}) {
    for (double t : {0.3, 1.0, 2.4}) {
      CHECK(t_cdf(t, df) == doctest::Approx(t_cdf_quadrature(t, df)).epsilon(1e-8));
    }
  }
}

TEST_CASE("t cdf reflection: F(-t) = 1 - F(t)") {
  for (int df : {1, 3, 9, 25})
    for (double t : {0.5, 1.7, 4.2})
      CHECK(t_cdf(-t, df) == doctest::Approx(1.0 - t_cdf(t, df)).epsilon(1e-12));
}

TEST_CASE("f cdf: boundaries, reference value, identity with t") {
  CHECK(f_cdf(0.0, 1, 10) == 0.0);
  CHECK(f_cdf(-0.5, 1, 10) == 0.0);
  CHECK(f_cdf(1e6, 1, 10) >= 0.999999);
  CHECK(f_cdf(3.2, 1, 10) == doctest::Approx(0.89607947930156218).epsilon(1e-12));
  for (int df : {3, 8, 20}) {
    for (double t : {0.4, 1.1, 2.9}) {
      const double via_t = 2.0 * t_cdf(t, df) - 1.0;
      CHECK(f_cdf(t * t, 1, df) == doctest::Approx(via_t).epsilon(1e-9));
    }
  }
}

TEST_CASE("significance stars thresholds") {
  CHECK(std::string(techevo::significance_stars(0.005)) == "***");
  CHECK(std::string(techevo::significance_stars(0.03)) == "**");
  CHECK(std::string(techevo::significance_stars(0.07)) == "*");
  CHECK(std::string(techevo::significance_stars(0.2)) == "");
  CHECK(std::string(techevo::significance_stars(0.01)) == "**");  // boundary is strict
}

TEST_CASE("distribution guards") {
  CHECK(code_of([] { t_cdf(1.0, 0); }) == errc::invalid_config);
  CHECK(code_of([] { f_cdf(1.0, 0, 5); }) == errc::invalid_config);
}
