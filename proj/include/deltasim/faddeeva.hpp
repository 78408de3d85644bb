#pragma once

#include <complex>

namespace deltasim {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0, using
/// Weideman's rational expansion with 40 terms (relative error ~1e-14).
/// Throws InvalidParameter for Im z < 0.
std::complex<double> faddeeva(std::complex<double> z);

/// Mean of 1/(v - pole) when v has density exp(-(v/width)^2)/(sqrt(pi)*width).
/// The pole must not lie on the real axis.
std::complex<double> gaussian_mean_inverse(std::complex<double> pole, double width);

}  // namespace deltasim
