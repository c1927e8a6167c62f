#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tfim/mode_space.hpp"

namespace tfim {

inline constexpr int kDefaultStepsPerPeriod = 4096;

/// One-period data for a single (k, -k) pair.
struct FloquetMode {
  double k = 0.0;
  Eigen::Matrix2cd propagator = Eigen::Matrix2cd::Identity();
  double mu = 0.0;      // quasi-energy, mu * period in [0, pi]
  double period = 0.0;

  double phase() const noexcept { return mu * period; }
};

struct FloquetSpectrum {
  DriveProtocol drive;
  int chain_length = 0;
  int steps = 0;
  std::vector<FloquetMode> modes;
  std::vector<double> v_group;   // central differences, one per interior grid point
  double v_max = 0.0;

  double period() const noexcept { return drive.period(); }
};

/// Time-ordered exponential of the pair generator over one period.
///
/// Fourth-order Magnus step on two Gauss-Legendre nodes per substep; every
/// substep is an exact SU(2) exponential, and the product is projected back
/// onto SU(2) at the end so the result is unitary to rounding for any `steps`.
Eigen::Matrix2cd one_period_propagator(const DriveProtocol& drive, double k,
                                       int steps = kDefaultStepsPerPeriod);

/// Principal quasi-energy of an SU(2) propagator: eigenvalues e^{-/+ i mu T}
/// with mu T in [0, pi].  Throws StructureViolation when the eigenphases are
/// not a conjugate pair.
double quasi_energy(const Eigen::Matrix2cd& propagator, double period);

/// Quasi-energy points closer than this to 0 or pi are left out of v_max.
inline constexpr double kFoldGuard = 1e-3;

FloquetSpectrum floquet_spectrum(const DriveProtocol& drive, const MomentumGrid& grid,
                                 int steps = kDefaultStepsPerPeriod);

/// U^n on an SU(2) matrix.  n <= 32 uses repeated multiplication, larger n the
/// spectral form cos(n t) I - i sin(n t) (n.sigma).
Eigen::Matrix2cd propagator_power(const Eigen::Matrix2cd& propagator, std::int64_t n);

/// Stroboscopic evolution of the pair amplitudes to n cycles.
std::vector<ModeState> evolve_modes(const std::vector<ModeState>& initial,
                                    const FloquetSpectrum& spectrum, std::int64_t n);

/// Max-norm of U^+ U - I.
double unitarity_residual(const Eigen::Matrix2cd& u);

}  // namespace tfim
