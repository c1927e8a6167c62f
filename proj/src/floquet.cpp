#include "tfim/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "tfim/errors.hpp"

namespace tfim {
namespace {

// U = [[a, -conj(b)], [b, conj(a)]], |a|^2 + |b|^2 = 1.
struct Su2 {
  complex a{1.0, 0.0};
  complex b{0.0, 0.0};

  Su2 operator*(const Su2& r) const noexcept {
    return {a * r.a - std::conj(b) * r.b, b * r.a + std::conj(a) * r.b};
  }

  void normalize() noexcept {
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
  }

  static Su2 project(const Eigen::Matrix2cd& m) noexcept {
    Su2 s{0.5 * (m(0, 0) + std::conj(m(1, 1))), 0.5 * (m(1, 0) - std::conj(m(0, 1)))};
    s.normalize();
    return s;
  }

  Eigen::Matrix2cd matrix() const {
    Eigen::Matrix2cd m;
    m << a, -std::conj(b), b, std::conj(a);
    return m;
  }

  // rotation angle t with eigenvalues e^{-/+ i t}, t in [0, pi]
  double angle() const noexcept { return std::atan2(std::hypot(a.imag(), std::abs(b)), a.real()); }
};

// exp(-i (x X + y Y + z Z))
Su2 exp_pauli(double x, double y, double z) noexcept {
  const double r = std::sqrt(x * x + y * y + z * z);
  const double s = r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
  return {complex(std::cos(r), -s * z), complex(s * y, -s * x)};
}

Su2 integrate_period(const DriveProtocol& drive, double k, int steps) {
  const double period = drive.period();
  const double dt = period / steps;
  const double offset = std::sqrt(3.0) / 6.0;
  const double commutator = std::sqrt(3.0) * dt * dt / 6.0;
  const double cos_k = std::cos(k);
  const double pair_y = 2.0 * std::sin(k);

  Su2 u;
  for (int s = 0; s < steps; ++s) {
    const double t0 = period * static_cast<double>(s) / steps;
    const double z1 = 2.0 * (drive.field_at(t0 + dt * (0.5 - offset)) - cos_k);
    const double z2 = 2.0 * (drive.field_at(t0 + dt * (0.5 + offset)) - cos_k);
    // generators m_i = (0, pair_y, z_i); Omega = dt/2 (m1 + m2) + c (m2 x m1)
    const double x = commutator * pair_y * (z1 - z2);
    const double y = dt * pair_y;
    const double z = 0.5 * dt * (z1 + z2);
    u = exp_pauli(x, y, z) * u;
  }
  u.normalize();
  return u;
}

double chebyshev_ratio(double theta, std::int64_t n) {
  // sin(n theta) / sin(theta), continuous through theta = 0 and pi
  const double s = std::sin(theta);
  if (std::abs(s) > 1e-10)
    return std::sin(static_cast<double>(n) * theta) / s;
  const double sign = (theta > 1.0 && n % 2 == 0) ? -1.0 : 1.0;
  return sign * static_cast<double>(n);
}

}  // namespace

Eigen::Matrix2cd one_period_propagator(const DriveProtocol& drive, double k, int steps) {
  if (steps < 1)
    throw InvalidArgument("one_period_propagator: steps must be >= 1, got " + std::to_string(steps));
  return integrate_period(drive, k, steps).matrix();
}

double quasi_energy(const Eigen::Matrix2cd& propagator, double period) {
  constexpr double tol = 1e-8;
  if (!(period > 0.0))
    throw InvalidArgument("quasi_energy: period must be positive");
  const complex det = propagator.determinant();
  const complex tr = propagator.trace();
  if (std::abs(det - 1.0) > tol || std::abs(tr.imag()) > tol || unitarity_residual(propagator) > tol) {
    std::ostringstream msg;
    msg << "quasi_energy: eigenphases are not a conjugate pair (det=" << det << ", trace=" << tr << ")";
    throw StructureViolation(msg.str());
  }
  return Su2::project(propagator).angle() / period;
}

FloquetSpectrum floquet_spectrum(const DriveProtocol& drive, const MomentumGrid& grid, int steps) {
  if (steps < 1)
    throw InvalidArgument("floquet_spectrum: steps must be >= 1");
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  const double period = drive.period();

  FloquetSpectrum spec;
  spec.drive = drive;
  spec.chain_length = grid.chain_length();
  spec.steps = steps;
  spec.modes.resize(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < count; ++m) {
    const double k = grid[static_cast<std::size_t>(m)];
    try {
      FloquetMode mode;
      mode.k = k;
      mode.period = period;
      mode.propagator = one_period_propagator(drive, k, steps);
      mode.mu = quasi_energy(mode.propagator, period);
      spec.modes[static_cast<std::size_t>(m)] = std::move(mode);
    } catch (...) {
      failures[static_cast<std::size_t>(m)] = std::current_exception();
    }
  }

  for (std::size_t m = 0; m < failures.size(); ++m) {
    if (!failures[m])
      continue;
    const std::string where = " [k=" + std::to_string(grid[m]) + "]";
    try {
      std::rethrow_exception(failures[m]);
    } catch (const StructureViolation& e) {
      throw StructureViolation(e.what() + where);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(e.what() + where);
    }
  }

  const double dk = grid.spacing();
  auto unfolded = [&](std::size_t m) {
    const double phase = spec.modes[m].phase();
    return phase > kFoldGuard && phase < std::numbers::pi - kFoldGuard;
  };
  for (std::size_t m = 1; m + 1 < spec.modes.size(); ++m) {
    const double v = (spec.modes[m + 1].mu - spec.modes[m - 1].mu) / (2.0 * dk);
    spec.v_group.push_back(v);
    if (unfolded(m - 1) && unfolded(m) && unfolded(m + 1))
      spec.v_max = std::max(spec.v_max, std::abs(v));
  }
  return spec;
}

Eigen::Matrix2cd propagator_power(const Eigen::Matrix2cd& propagator, std::int64_t n) {
  if (n < 0)
    throw InvalidArgument("propagator_power: negative exponent");
  const Su2 u = Su2::project(propagator);
  if (n <= 32) {
    Su2 acc;
    for (std::int64_t i = 0; i < n; ++i)
      acc = u * acc;
    return acc.matrix();
  }
  const double theta = u.angle();
  const double ratio = chebyshev_ratio(theta, n);
  const Su2 un{complex(std::cos(static_cast<double>(n) * theta), ratio * u.a.imag()), ratio * u.b};
  return un.matrix();
}

std::vector<ModeState> evolve_modes(const std::vector<ModeState>& initial,
                                    const FloquetSpectrum& spectrum, std::int64_t n) {
  if (n < 0)
    throw InvalidArgument("evolve_modes: cycle count must be nonnegative");
  if (initial.size() != spectrum.modes.size())
    throw InvalidArgument("evolve_modes: " + std::to_string(initial.size()) + " modes vs spectrum of " +
                          std::to_string(spectrum.modes.size()));
  for (std::size_t m = 0; m < initial.size(); ++m) {
    if (std::abs(initial[m].k - spectrum.modes[m].k) > 1e-12)
      throw InvalidArgument("evolve_modes: momentum mismatch at index " + std::to_string(m));
    if (std::abs(initial[m].norm_sq() - 1.0) > 1e-9)
      throw InvalidArgument("evolve_modes: initial mode at index " + std::to_string(m) + " is not normalized");
  }
  if (n == 0)
    return initial;

  std::vector<ModeState> out(initial.size());
  const auto count = static_cast<std::ptrdiff_t>(initial.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto m = static_cast<std::size_t>(i);
    const Eigen::Matrix2cd un = propagator_power(spectrum.modes[m].propagator, n);
    const Eigen::Vector2cd nambu(initial[m].v, initial[m].u);
    const Eigen::Vector2cd next = un * nambu;
    out[m] = ModeState{initial[m].k, next(1), next(0), initial[m].n_cycles + n};
  }
  return out;
}

double unitarity_residual(const Eigen::Matrix2cd& u) {
  return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace tfim
