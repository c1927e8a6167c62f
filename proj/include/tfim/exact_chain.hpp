#pragma once

// Brute-force state-vector treatment of the same periodic spin chain,
// H(t) = -sum_i sx_i sx_{i+1} + h(t) sum_i sz_i, on the full 2^N space.
// Shares no code path with the free-fermion pipeline; used as its oracle.
//
// Basis index bit i is site i; a set bit is spin up (sz = +1), which the
// Jordan-Wigner map c_i = prod_{j<i}(-sz_j) s-_i makes an occupied site.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tfim/mode_space.hpp"

namespace tfim::exact {

class SpinChain {
public:
  static constexpr int kMaxSites = 16;

  explicit SpinChain(int sites);

  int sites() const noexcept { return sites_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << sites_; }

  Eigen::VectorXcd apply_hamiltonian(const Eigen::VectorXcd& psi, double h) const;

  /// Lowest state with an even number of up spins.
  Eigen::VectorXcd ground_state(double h) const;

  /// Fourth-order (triple-jump) composition of Strang steps
  /// e^{-i h B dt/2} e^{-i A dt} e^{-i h B dt/2}; the coupling term is applied
  /// exactly in the sx eigenbasis via a Walsh-Hadamard transform.
  Eigen::VectorXcd evolve(Eigen::VectorXcd psi, const DriveProtocol& drive, std::int64_t cycles,
                          int steps_per_period = 2000) const;

  /// von Neumann entropy (bits) of sites 0 .. l-1.
  double block_entropy(const Eigen::VectorXcd& psi, int l) const;

  Eigen::VectorXcd annihilate(const Eigen::VectorXcd& psi, int site) const;
  Eigen::VectorXcd create(const Eigen::VectorXcd& psi, int site) const;

  /// <c_0^+ c_r> and <c_0 c_r> for r = 0 .. N-1.
  struct Kernels {
    std::vector<std::complex<double>> f, g;
  };
  Kernels kernels(const Eigen::VectorXcd& psi) const;

  /// alpha_nm = <c_n c_m^+>, beta_nm = <c_n c_m> on sites 0 .. l-1.
  struct BlockCorrelators {
    Eigen::MatrixXcd alpha, beta;
  };
  BlockCorrelators block_correlators(const Eigen::VectorXcd& psi, int l) const;

private:
  void walsh_hadamard(Eigen::VectorXcd& psi) const;

  int sites_;
  std::vector<double> zz_field_;    // sum_i sz_i per basis state
  std::vector<double> xx_coupling_; // -sum_i x_i x_{i+1} per sx-basis state
};

}  // namespace tfim::exact
