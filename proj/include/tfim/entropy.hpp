#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tfim/correlation.hpp"

namespace tfim {

struct EntropySample {
  int l = 0;
  double entropy = 0.0;  // bits
};

struct EntropyProfile {
  int chain_length = 0;
  std::int64_t n_cycles = 0;
  DriveProtocol drive;
  std::vector<EntropySample> samples;  // l strictly increasing
};

/// Ascending eigenvalues of the Hermitian Γ (LAPACK zheevd, values only).
Eigen::VectorXd gamma_spectrum(const CorrelationBlock& block);

/// -sum_j lambda_j log2 lambda_j over the 2l eigenvalues of Γ.  Eigenvalues
/// within 1e-6 of [0, 1] are clamped; anything further out throws
/// SpectrumViolation.
double entanglement_entropy(const CorrelationBlock& block);
double entropy_from_spectrum(const Eigen::VectorXd& eigenvalues);

EntropyProfile entropy_profile(const PairCorrelators& corr, std::span<const int> block_sizes,
                               std::int64_t n_cycles, const DriveProtocol& drive);

}  // namespace tfim
