#include "deltasim/thermal.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "deltasim/error.hpp"
#include "deltasim/faddeeva.hpp"
#include "deltasim/quadrature.hpp"

namespace deltasim {

namespace {

constexpr double kMinSpeed = 1e-6;
constexpr int kTraceRow = 8;
constexpr int kFallbackPoints = 8001;

DensityMatrix trapezoid_average(const SystemParams& p, double v_mp,
                                const AtomicConstants& consts, double z, int points,
                                double span) {
  const auto collapse = collapse_operators(p);
  const double v_max = span * v_mp;
  const double dv = 2.0 * v_max / (points - 1);
  ComplexMatrix3 acc = ComplexMatrix3::Zero();
  double weight_sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double v = -v_max + i * dv;
    double w = std::exp(-(v / v_mp) * (v / v_mp));
    if (i == 0 || i == points - 1) w *= 0.5;
    acc += w * steady_state(liouvillian(build_hamiltonian(p, v, z, consts.kp, consts.kc), collapse))
                   .matrix();
    weight_sum += w;
  }
  return DensityMatrix(acc / weight_sum);
}

DensityMatrix gauss_hermite_average(const SystemParams& p, double v_mp,
                                    const AtomicConstants& consts, double z, int nodes) {
  const auto collapse = collapse_operators(p);
  const auto& rule = gauss_hermite(nodes);
  ComplexMatrix3 acc = ComplexMatrix3::Zero();
  double weight_sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double v = v_mp * rule.nodes[i];
    acc += rule.weights[i] *
           steady_state(liouvillian(build_hamiltonian(p, v, z, consts.kp, consts.kc), collapse))
               .matrix();
    weight_sum += rule.weights[i];
  }
  return DensityMatrix(acc / weight_sum);
}

// The trace-constrained steady-state system is (A + v B) x = e with B diagonal,
// so x(v) = sum_j V_j c_j / (1 + (v - v_s) lambda_j) from the eigenpairs of
// K = (A + v_s B)^{-1} B. Returns false when the expansion cannot be trusted.
bool residue_average(const SystemParams& p, double v_mp, const AtomicConstants& consts, double z,
                     int nodes, ComplexMatrix3& out) {
  const auto collapse = collapse_operators(p);
  Superoperator a = liouvillian(build_hamiltonian(p, 0.0, z, consts.kp, consts.kc), collapse);
  Superoperator b = doppler_superoperator(consts.kp, consts.kc);
  a.row(kTraceRow).setZero();
  a(kTraceRow, 0) = a(kTraceRow, 4) = a(kTraceRow, 8) = 1.0;
  b.row(kTraceRow).setZero();
  StateVector e = StateVector::Zero();
  e(kTraceRow) = 1.0;

  double shift = 0.0;
  Eigen::PartialPivLU<Superoperator> lu;
  bool factored = false;
  for (double s : {0.0, 0.37 * v_mp, -0.71 * v_mp}) {
    lu.compute(a + s * b);
    if (lu.rcond() > 1e-12) {
      shift = s;
      factored = true;
      break;
    }
  }
  if (!factored) return false;

  const Superoperator k = lu.solve(b);
  const StateVector x0 = lu.solve(e);
  Eigen::ComplexEigenSolver<Superoperator> es(k);
  if (es.info() != Eigen::Success) return false;
  const auto& vecs = es.eigenvectors();
  const auto& lams = es.eigenvalues();
  Eigen::PartialPivLU<Superoperator> lu_v(vecs);
  if (!(lu_v.rcond() > 1e-12)) return false;
  const StateVector coef = lu_v.solve(x0);

  std::array<bool, 9> resonant{};
  StateVector avg = StateVector::Zero();
  for (int j = 0; j < 9; ++j) {
    const Complex lam = lams(j);
    if (std::abs(lam) * v_mp < 1e-12) continue;
    const Complex pole = shift - 1.0 / lam;
    if (std::abs(pole.imag()) >= 2.0 * v_mp) continue;
    resonant[j] = true;
    avg += vecs.col(j) * (coef(j) / lam * gaussian_mean_inverse(pole, v_mp));
  }

  auto remainder = [&](double v) {
    StateVector r = StateVector::Zero();
    for (int j = 0; j < 9; ++j)
      if (!resonant[j]) r += vecs.col(j) * (coef(j) / (1.0 + (v - shift) * lams(j)));
    return r;
  };
  const auto& rule = gauss_hermite(nodes);
  StateVector smooth = StateVector::Zero();
  double weight_sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    smooth += rule.weights[i] * remainder(v_mp * rule.nodes[i]);
    weight_sum += rule.weights[i];
  }
  avg += smooth / weight_sum;

  // Spot-check the expansion against direct solves away from the shift point.
  for (double probe : {0.29 * v_mp, -1.13 * v_mp}) {
    const StateVector direct = (a + probe * b).partialPivLu().solve(e);
    StateVector expanded = remainder(probe);
    for (int j = 0; j < 9; ++j)
      if (resonant[j]) expanded += vecs.col(j) * (coef(j) / (1.0 + (probe - shift) * lams(j)));
    if (!((direct - expanded).cwiseAbs().maxCoeff() < 1e-9)) return false;
  }
  if (!avg.allFinite()) return false;

  out = Eigen::Map<const ComplexMatrix3>(avg.data());
  return true;
}

}  // namespace

AtomicConstants AtomicConstants::rubidium85(double delta_k) {
  AtomicConstants c;
  c.mass = 84.9118 * phys::kAtomicMassUnit;
  c.hyperfine_freq = 3.035e9;
  c.probe_wavelength = 780.24e-9;
  c.kp = 2.0 * std::numbers::pi / c.probe_wavelength;
  c.delta_k = delta_k;
  c.kc = c.kp - delta_k;
  return c;
}

double AtomicConstants::splitting_delta_k() const {
  return 2.0 * std::numbers::pi * hyperfine_freq / phys::kSpeedOfLight;
}

void AtomicConstants::validate() const {
  if (!(mass > 0.0)) throw InvalidParameter("atomic mass must be > 0");
  if (!(hyperfine_freq > 0.0)) throw InvalidParameter("hyperfine frequency must be > 0");
  if (!(delta_k > 0.0)) throw InvalidParameter("delta_k must be > 0");
  if (!(kc > 0.0) || !(kp > kc)) throw InvalidParameter("wavenumbers must satisfy kp > kc > 0");
  if (std::abs(kp - kc - delta_k) > 1e-9 * kp)
    throw InvalidParameter("delta_k must equal kp - kc");
  if (std::abs(delta_k - splitting_delta_k()) / delta_k >= 0.01)
    throw InvalidParameter("delta_k inconsistent with the hyperfine splitting");
}

double thermal_nbar(double temperature, double freq_hz) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw InvalidParameter("temperature must be >= 0");
  if (!(freq_hz > 0.0)) throw InvalidParameter("frequency must be > 0");
  if (temperature == 0.0) return 0.0;
  const double x = phys::kPlanck * freq_hz / (phys::kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double most_probable_speed(double temperature, double mass) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw InvalidParameter("temperature must be >= 0");
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  return std::sqrt(2.0 * phys::kBoltzmann * temperature / mass);
}

ThermalEnv ThermalEnv::at(double temperature, const AtomicConstants& consts) {
  return {temperature, thermal_nbar(temperature, consts.hyperfine_freq),
          most_probable_speed(temperature, consts.mass)};
}

void DopplerQuadrature::validate() const {
  if (nodes < 1) throw InvalidParameter("quadrature needs at least one node");
  if (method == Method::Trapezoid && nodes < 2)
    throw InvalidParameter("trapezoid quadrature needs at least two points");
  if (!(span > 0.0)) throw InvalidParameter("quadrature span must be > 0");
}

DensityMatrix doppler_average(const SystemParams& params, const ThermalEnv& env,
                              const AtomicConstants& consts, double z,
                              const DopplerQuadrature& quad) {
  quad.validate();
  SystemParams p = params;
  p.nbar = env.nbar;
  if (env.temperature == 0.0 || env.v_mp < kMinSpeed)
    return atom_steady_state(p, 0.0, z, consts.kp, consts.kc);

  switch (quad.method) {
    case DopplerQuadrature::Method::GaussHermite:
      return gauss_hermite_average(p, env.v_mp, consts, z, quad.nodes);
    case DopplerQuadrature::Method::Trapezoid:
      return trapezoid_average(p, env.v_mp, consts, z, quad.nodes, quad.span);
    case DopplerQuadrature::Method::Residue:
      break;
  }
  ComplexMatrix3 avg;
  if (residue_average(p, env.v_mp, consts, z, quad.nodes, avg)) return DensityMatrix(avg);
  return trapezoid_average(p, env.v_mp, consts, z, kFallbackPoints, quad.span);
}

}  // namespace deltasim
