#include "deltasim/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "deltasim/error.hpp"

namespace deltasim {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double l = 0.0;
  std::array<double, kTerms> a{};  // p(Z) = sum_n a[n] Z^n
};

WeidemanTable build_table() {
  constexpr int m = 2 * kTerms;
  constexpr int m2 = 2 * m;
  const double pi = std::numbers::pi;
  WeidemanTable tab;
  tab.l = std::sqrt(kTerms / std::sqrt(2.0));

  // f sampled on the tan-mapped grid, f[0] = 0, then k = -m+1 .. m-1.
  std::array<double, m2> f{};
  for (int k = -m + 1; k <= m - 1; ++k) {
    const double t = tab.l * std::tan(k * pi / (2.0 * m));
    f[k + m] = std::exp(-t * t) * (tab.l * tab.l + t * t);
  }
  // Real part of the DFT of the half-shifted samples, coefficients 1..N.
  for (int n = 1; n <= kTerms; ++n) {
    double acc = 0.0;
    for (int j = 0; j < m2; ++j) acc += f[(j + m) % m2] * std::cos(2.0 * pi * j * n / m2);
    tab.a[n - 1] = acc / m2;
  }
  return tab;
}

const WeidemanTable& table() {
  static const WeidemanTable tab = build_table();
  return tab;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
  if (z.imag() < 0.0) throw InvalidParameter("faddeeva: Im z must be >= 0");
  const auto& tab = table();
  const std::complex<double> iz(-z.imag(), z.real());
  const std::complex<double> denom = tab.l - iz;
  const std::complex<double> zz = (tab.l + iz) / denom;
  std::complex<double> p = 0.0;
  for (int n = kTerms - 1; n >= 0; --n) p = p * zz + tab.a[n];
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

std::complex<double> gaussian_mean_inverse(std::complex<double> pole, double width) {
  if (!(width > 0.0)) throw InvalidParameter("gaussian_mean_inverse: width must be > 0");
  const std::complex<double> zeta = pole / width;
  const std::complex<double> i_sqrt_pi(0.0, std::sqrt(std::numbers::pi));
  if (zeta.imag() > 0.0) return i_sqrt_pi / width * faddeeva(zeta);
  if (zeta.imag() < 0.0) return -i_sqrt_pi / width * faddeeva(-zeta);
  throw SingularParameter("gaussian_mean_inverse: pole on the real axis");
}

}  // namespace deltasim
