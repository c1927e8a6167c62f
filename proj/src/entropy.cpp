#include "tfim/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <string>

#include "tfim/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace tfim {

namespace {
constexpr double kClampTolerance = 1e-6;
}

Eigen::VectorXd gamma_spectrum(const CorrelationBlock& block) {
  Eigen::MatrixXcd work = block.gamma;  // column-major, overwritten by LAPACK
  const auto n = static_cast<lapack_int>(work.rows());
  Eigen::VectorXd w(work.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0)
    throw SpectrumViolation("zheevd failed for l=" + std::to_string(block.l) + " (info " + std::to_string(info) +
                            ")");
  return w;
}

double entropy_from_spectrum(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (!(lambda >= -kClampTolerance && lambda <= 1.0 + kClampTolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "correlation-matrix eigenvalue " << lambda << " outside [0, 1]";
      throw SpectrumViolation(msg.str());
    }
    const double x = std::clamp(lambda, 0.0, 1.0);
    if (x > 0.0)
      s -= x * std::log2(x);
  }
  return std::max(s, 0.0);
}

double entanglement_entropy(const CorrelationBlock& block) {
  try {
    return entropy_from_spectrum(gamma_spectrum(block));
  } catch (const SpectrumViolation& e) {
    throw SpectrumViolation(std::string(e.what()) + " [l=" + std::to_string(block.l) + "]");
  }
}

EntropyProfile entropy_profile(const PairCorrelators& corr, std::span<const int> block_sizes,
                               std::int64_t n_cycles, const DriveProtocol& drive) {
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    if (block_sizes[i] < 1 || block_sizes[i] > corr.chain_length)
      throw InvalidArgument("entropy_profile: block size " + std::to_string(block_sizes[i]) + " outside [1, " +
                            std::to_string(corr.chain_length) + "]");
    if (i > 0 && block_sizes[i] <= block_sizes[i - 1])
      throw InvalidArgument("entropy_profile: block sizes must be strictly increasing");
  }

  EntropyProfile profile;
  profile.chain_length = corr.chain_length;
  profile.n_cycles = n_cycles;
  profile.drive = drive;
  profile.samples.resize(block_sizes.size());
  std::vector<std::exception_ptr> failures(block_sizes.size());

  // largest blocks first so the dynamic schedule balances
  const auto count = static_cast<std::ptrdiff_t>(block_sizes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = count - 1; i >= 0; --i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const auto block = block_correlation_matrix(corr, block_sizes[idx], n_cycles);
      profile.samples[idx] = {block_sizes[idx], entanglement_entropy(block)};
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (const auto& failure : failures)
    if (failure)
      std::rethrow_exception(failure);
  return profile;
}

}  // namespace tfim
