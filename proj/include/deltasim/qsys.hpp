#pragma once

// Three-level Delta system: Hamiltonian, Lindblad dissipator and steady state
// of a single atom at fixed velocity and position.
//
// Units: every rate, Rabi frequency and detuning is in angular MHz (rad/us),
// so time is in microseconds. Doppler shifts k*v (rad/s) are scaled by 1e-6.
// Basis order is |1>, |2>, |3>; matrices are stored 0-based, so the physics
// element rho_31 lives at (2, 0).

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace deltasim {

using Complex = std::complex<double>;
using ComplexMatrix3 = Eigen::Matrix<Complex, 3, 3>;
using Superoperator = Eigen::Matrix<Complex, 9, 9>;
using StateVector = Eigen::Matrix<Complex, 9, 1>;

/// Converts k*v in rad/s to angular MHz.
inline constexpr double kDopplerScale = 1e-6;

struct SystemParams {
  Complex omega_p{1.0, 0.0};  // probe Rabi frequency, |.| = Omega_p, arg = phi_p
  Complex omega_c{6.4, 0.0};  // coupling Rabi frequency
  double omega_mw = 0.8;      // microwave Rabi magnitude
  double phi_mw = std::numbers::pi / 2;
  double delta_p = 0.0;
  double delta_c = 0.0;
  double delta_mw = 0.0;
  double gamma_12 = 0.001;
  double gamma_13 = 5.0;
  double gamma_23 = 5.0;
  double gamma_c = 0.0;
  double nbar = 0.0;
  double eta = 1.0;  // propagation coupling, angular MHz per metre

  /// Throws InvalidParameter on negative rates, negative n-bar, negative
  /// microwave magnitude or any non-finite field.
  void validate() const;
};

/// 3x3 density matrix in the |1>,|2>,|3> basis.
class DensityMatrix {
 public:
  DensityMatrix();  // |1><1|
  explicit DensityMatrix(const ComplexMatrix3& m) : m_(m) {}

  static DensityMatrix pure(int level);  // level in {1, 2, 3}
  static DensityMatrix from_vector(const StateVector& v);

  /// Element rho_{row,col} with 1-based physics labels, e.g. element(3, 1).
  Complex element(int row, int col) const { return m_(row - 1, col - 1); }
  double population(int level) const { return m_(level - 1, level - 1).real(); }
  Complex rho31() const { return m_(2, 0); }
  Complex rho13() const { return m_(0, 2); }

  const ComplexMatrix3& matrix() const { return m_; }
  StateVector vectorized() const;  // column-major

  Complex trace() const { return m_.trace(); }
  double hermiticity_error() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;     // of the Hermitian part

 private:
  ComplexMatrix3 m_;
};

/// Collapse operator sqrt(rate) * op, with op a bare transition/projector.
struct CollapseOperator {
  double rate = 0.0;
  ComplexMatrix3 op = ComplexMatrix3::Zero();

  ComplexMatrix3 scaled() const { return std::sqrt(rate) * op; }
};

/// Rotating-frame Hamiltonian at velocity v (m/s) and position z (m).
ComplexMatrix3 build_hamiltonian(const SystemParams& params, double v, double z, double kp,
                                 double kc);

/// The five operators: thermal pair on |1><->|2>, optical decays 3->1 and
/// 3->2, and ground-state dephasing. Zero-rate entries are kept so the list
/// always has five elements.
std::vector<CollapseOperator> collapse_operators(const SystemParams& params);

/// Superoperator M with vec(d rho/dt) = M vec(rho), column-major vec.
Superoperator liouvillian(const ComplexMatrix3& hamiltonian,
                          std::span<const CollapseOperator> collapse);

/// d M / d v: the velocity-linear part of the Liouvillian. Diagonal, since v
/// enters only through the detunings.
Superoperator doppler_superoperator(double kp, double kc);

/// Unique trace-one kernel vector of M. The rho_33 row is replaced by the
/// trace constraint and the system is LU-solved. Throws DegenerateSteadyState
/// when the condition estimate exceeds 1e12.
DensityMatrix steady_state(const Superoperator& liouv);

/// Fixed-step RK4 integration of d vec(rho)/dt = M vec(rho) up to t_final.
/// The step is shrunk so that an integral number of steps lands on t_final.
/// The result is renormalized to unit trace.
DensityMatrix evolve_to_steady(const Superoperator& liouv, const DensityMatrix& rho0,
                               double t_final, double dt);

/// Steady state of one atom; shorthand for the three calls above.
DensityMatrix atom_steady_state(const SystemParams& params, double v, double z, double kp,
                                double kc);

}  // namespace deltasim
