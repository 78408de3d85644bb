#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deltasim/error.hpp"
#include "deltasim/faddeeva.hpp"
#include "deltasim/quadrature.hpp"

using namespace deltasim;
using C = std::complex<double>;

namespace {

bool close(C a, C b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("faddeeva against reference values") {
  // Reference values from an independent double-precision implementation.
  const struct {
    C z, w;
  } cases[] = {
      {{0, 0}, {1.0, 0.0}},
      {{1, 0}, {0.36787944117144233, 0.6071577058413937}},
      {{0, 1}, {0.427583576155807, 0.0}},
      {{1, 1}, {0.30474420525691254, 0.2082189382028316}},
      {{0.5, 0.01}, {0.7723450184100668, 0.47121688569118503}},
      {{-3, 0.2}, {0.015626770455552136, -0.19966856321866638}},
      {{10, 1e-3}, {5.728717502841752e-06, 0.056705393651106197}},
      {{100, 50}, {0.0022569569466891325, 0.00451355276004527}},
      {{5.5, 0}, {7.287724095819692e-14, 0.10436743643678122}},
      {{1e-5, 1e-5}, {0.9999887162083313, 1.1283591672459637e-05}},
      {{1e4, 1}, {5.641895863687041e-09, 5.641895807268083e-05}},
      {{-0.3, 4}, {0.13633055621060713, -0.009669853326112882}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.z);
    CHECK(close(faddeeva(c.z), c.w, 1e-12));
  }
}

TEST_CASE("faddeeva symmetry and domain") {
  for (double x : {-7.0, -1.3, 0.2, 2.5}) {
    for (double y : {0.0, 0.05, 1.0, 6.0}) {
      const C z(x, y);
      CHECK(close(faddeeva(-std::conj(z)), std::conj(faddeeva(z)), 1e-13));
    }
  }
  CHECK_THROWS_AS(faddeeva(C(1.0, -0.1)), InvalidParameter);
}

TEST_CASE("gaussian mean of a simple pole") {
  const double width = 2.0;
  for (C pole : {C(0.3, 0.05), C(-1.7, -0.4), C(4.0, 2.0), C(0.0, -3.0)}) {
    // Dense trapezoid; the integrand is analytic in a strip around the axis.
    const int n = 48001;
    const double span = 12.0 * width, h = 2.0 * span / (n - 1);
    C sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = -span + i * h;
      sum += std::exp(-(v / width) * (v / width)) / (v - pole);
    }
    const C expected = sum * h / (std::sqrt(std::numbers::pi) * width);
    CAPTURE(pole);
    CHECK(close(gaussian_mean_inverse(pole, width), expected, 1e-10));
  }
  CHECK_THROWS_AS(gaussian_mean_inverse(C(1.0, 0.0), 1.0), SingularParameter);
  CHECK_THROWS_AS(gaussian_mean_inverse(C(1.0, 1.0), 0.0), InvalidParameter);
}

TEST_CASE("gauss-hermite rules") {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  SUBCASE("small rules") {
    const auto& one = gauss_hermite(1);
    REQUIRE(one.nodes.size() == 1);
    CHECK(one.nodes[0] == doctest::Approx(0.0));
    CHECK(one.weights[0] == doctest::Approx(sqrt_pi));
    const auto& two = gauss_hermite(2);
    CHECK(two.nodes[0] == doctest::Approx(-std::sqrt(0.5)));
    CHECK(two.nodes[1] == doctest::Approx(std::sqrt(0.5)));
    CHECK(two.weights[0] == doctest::Approx(sqrt_pi / 2));
  }
  SUBCASE("moments") {
    for (int n : {16, 64, 128}) {
      const auto& r = gauss_hermite(n);
      REQUIRE(static_cast<int>(r.nodes.size()) == n);
      double m0 = 0.0, m2 = 0.0, m10 = 0.0, odd = 0.0;
      for (int i = 0; i < n; ++i) {
        m0 += r.weights[i];
        m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
        m10 += r.weights[i] * std::pow(r.nodes[i], 10);
        odd += r.weights[i] * std::pow(r.nodes[i], 3);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
      }
      CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
      CHECK(m2 == doctest::Approx(sqrt_pi / 2).epsilon(1e-13));
      CHECK(m10 == doctest::Approx(945.0 / 32.0 * sqrt_pi).epsilon(1e-12));
      CHECK(std::abs(odd) < 1e-12);
    }
  }
  SUBCASE("cached") { CHECK(&gauss_hermite(64) == &gauss_hermite(64)); }
  SUBCASE("invalid") { CHECK_THROWS_AS(gauss_hermite(0), InvalidParameter); }
}
