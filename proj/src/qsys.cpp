#include "deltasim/qsys.hpp"

#include <cmath>
#include <string>

#include "deltasim/error.hpp"

namespace deltasim {

namespace {

constexpr int kTraceRow = 8;  // vec index of rho_33 (2 + 3*2)

ComplexMatrix3 ket_bra(int i, int j) {
  ComplexMatrix3 m = ComplexMatrix3::Zero();
  m(i, j) = 1.0;
  return m;
}

// kron(A, B) for 3x3 operands.
Superoperator kron(const ComplexMatrix3& a, const ComplexMatrix3& b) {
  Superoperator out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw InvalidParameter(std::string(name) + " must be finite");
}

void require_non_negative(double x, const char* name) {
  require_finite(x, name);
  if (x < 0.0) throw InvalidParameter(std::string(name) + " must be >= 0");
}

}  // namespace

void SystemParams::validate() const {
  require_finite(omega_p.real(), "omega_p");
  require_finite(omega_p.imag(), "omega_p");
  require_finite(omega_c.real(), "omega_c");
  require_finite(omega_c.imag(), "omega_c");
  require_non_negative(omega_mw, "omega_mw");
  require_finite(phi_mw, "phi_mw");
  require_finite(delta_p, "delta_p");
  require_finite(delta_c, "delta_c");
  require_finite(delta_mw, "delta_mw");
  require_non_negative(gamma_12, "gamma_12");
  require_non_negative(gamma_13, "gamma_13");
  require_non_negative(gamma_23, "gamma_23");
  require_non_negative(gamma_c, "gamma_c");
  require_non_negative(nbar, "nbar");
  require_finite(eta, "eta");
}

DensityMatrix::DensityMatrix() : m_(ket_bra(0, 0)) {}

DensityMatrix DensityMatrix::pure(int level) {
  if (level < 1 || level > 3) throw InvalidParameter("level must be 1, 2 or 3");
  return DensityMatrix(ket_bra(level - 1, level - 1));
}

DensityMatrix DensityMatrix::from_vector(const StateVector& v) {
  return DensityMatrix(Eigen::Map<const ComplexMatrix3>(v.data()));
}

StateVector DensityMatrix::vectorized() const {
  return Eigen::Map<const StateVector>(m_.data());
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix3 herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix3> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ComplexMatrix3 build_hamiltonian(const SystemParams& params, double v, double z, double kp,
                                 double kc) {
  ComplexMatrix3 h = ComplexMatrix3::Zero();
  h(0, 0) = params.delta_p - kp * v * kDopplerScale;
  h(1, 1) = params.delta_c - kc * v * kDopplerScale;
  h(0, 1) = std::polar(params.omega_mw, params.phi_mw + (kp - kc) * z);
  h(0, 2) = params.omega_p;
  h(1, 2) = params.omega_c;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

std::vector<CollapseOperator> collapse_operators(const SystemParams& params) {
  for (double rate : {params.gamma_12, params.gamma_13, params.gamma_23, params.gamma_c,
                      params.nbar}) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw InvalidParameter("decay rates and nbar must be finite and >= 0");
  }
  return {
      {(params.nbar + 1.0) * params.gamma_12, ket_bra(0, 1)},
      {params.nbar * params.gamma_12, ket_bra(1, 0)},
      {params.gamma_13, ket_bra(0, 2)},
      {params.gamma_23, ket_bra(1, 2)},
      {params.gamma_c, ket_bra(0, 0) - ket_bra(1, 1)},
  };
}

Superoperator liouvillian(const ComplexMatrix3& hamiltonian,
                          std::span<const CollapseOperator> collapse) {
  const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidParameter("Hamiltonian is not Hermitian");

  const ComplexMatrix3 id = ComplexMatrix3::Identity();
  const Complex i_unit(0.0, 1.0);
  Superoperator m = -i_unit * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& c : collapse) {
    if (c.rate == 0.0) continue;
    const ComplexMatrix3 op = c.scaled();
    const ComplexMatrix3 cdc = op.adjoint() * op;
    m += kron(op.conjugate(), op) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return m;
}

Superoperator doppler_superoperator(double kp, double kc) {
  const double d[3] = {-kp * kDopplerScale, -kc * kDopplerScale, 0.0};
  Superoperator b = Superoperator::Zero();
  for (int col = 0; col < 3; ++col)
    for (int row = 0; row < 3; ++row) b(row + 3 * col, row + 3 * col) = Complex(0.0, -(d[row] - d[col]));
  return b;
}

DensityMatrix steady_state(const Superoperator& liouv) {
  Superoperator a = liouv;
  a.row(kTraceRow).setZero();
  a(kTraceRow, 0) = a(kTraceRow, 4) = a(kTraceRow, 8) = 1.0;
  StateVector rhs = StateVector::Zero();
  rhs(kTraceRow) = 1.0;

  Eigen::PartialPivLU<Superoperator> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12))
    throw DegenerateSteadyState("steady-state system is singular (rcond " + std::to_string(rcond) +
                                ")");
  const StateVector x = lu.solve(rhs);

  const double m_norm = liouv.cwiseAbs().rowwise().sum().maxCoeff();
  const double residual = (liouv * x).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-9 * std::max(m_norm, 1e-300))
    throw DegenerateSteadyState("steady-state residual too large");
  return DensityMatrix::from_vector(x);
}

DensityMatrix evolve_to_steady(const Superoperator& liouv, const DensityMatrix& rho0,
                               double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0) || !std::isfinite(t_final))
    throw InvalidParameter("evolve_to_steady needs dt > 0 and finite t_final >= 0");

  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  StateVector x = rho0.vectorized();
  if (steps <= 0) return rho0;
  const double h = t_final / static_cast<double>(steps);

  // For a constant linear system one RK4 step is the degree-4 Taylor polynomial of h*M.
  const Superoperator hm = h * liouv;
  Superoperator step = Superoperator::Identity();
  Superoperator term = Superoperator::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = term * hm / static_cast<double>(k);
    step += term;
  }

  for (long long n = 0; n < steps; ++n) {
    x = step * x;
    if ((n & 1023) == 1023 && !x.allFinite())
      throw Instability("non-finite state during integration; reduce dt");
  }
  if (!x.allFinite()) throw Instability("non-finite state during integration; reduce dt");

  const Complex tr = x(0) + x(4) + x(8);
  if (std::abs(tr) == 0.0) throw Instability("trace collapsed to zero");
  return DensityMatrix::from_vector(x / tr);
}

DensityMatrix atom_steady_state(const SystemParams& params, double v, double z, double kp,
                                double kc) {
  const auto collapse = collapse_operators(params);
  return steady_state(liouvillian(build_hamiltonian(params, v, z, kp, kc), collapse));
}

}  // namespace deltasim
