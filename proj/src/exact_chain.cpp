#include "tfim/exact_chain.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tfim/errors.hpp"

namespace tfim::exact {
namespace {

double parity_sign(std::size_t state, int site) {
  const std::size_t below = state & ((std::size_t{1} << site) - 1);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

SpinChain::SpinChain(int sites) : sites_(sites) {
  if (sites < 2 || sites > kMaxSites)
    throw InvalidArgument("SpinChain: site count " + std::to_string(sites) + " outside [2, " +
                          std::to_string(kMaxSites) + "]");
  const std::size_t dim = dimension();
  zz_field_.resize(dim);
  xx_coupling_.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    double z = 0.0, xx = 0.0;
    for (int i = 0; i < sites; ++i) {
      const int j = (i + 1) % sites;
      z += ((s >> i) & 1u) ? 1.0 : -1.0;
      // in the transformed basis bit 0 is sx = +1
      const double xi = ((s >> i) & 1u) ? -1.0 : 1.0;
      const double xj = ((s >> j) & 1u) ? -1.0 : 1.0;
      xx -= xi * xj;
    }
    zz_field_[s] = z;
    xx_coupling_[s] = xx;
  }
}

Eigen::VectorXcd SpinChain::apply_hamiltonian(const Eigen::VectorXcd& psi, double h) const {
  const std::size_t dim = dimension();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    std::complex<double> acc = h * zz_field_[s] * psi[static_cast<Eigen::Index>(s)];
    for (int i = 0; i < sites_; ++i) {
      const int j = (i + 1) % sites_;
      const std::size_t flipped = s ^ ((std::size_t{1} << i) | (std::size_t{1} << j));
      acc -= psi[static_cast<Eigen::Index>(flipped)];
    }
    out[static_cast<Eigen::Index>(s)] = acc;
  }
  return out;
}

Eigen::VectorXcd SpinChain::ground_state(double h) const {
  std::vector<std::size_t> even;
  for (std::size_t s = 0; s < dimension(); ++s)
    if (std::popcount(s) % 2 == 0)
      even.push_back(s);
  std::vector<Eigen::Index> position(dimension(), -1);
  for (std::size_t i = 0; i < even.size(); ++i)
    position[even[i]] = static_cast<Eigen::Index>(i);

  const auto n = static_cast<Eigen::Index>(even.size());
  Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::size_t s = even[static_cast<std::size_t>(c)];
    ham(c, c) += h * zz_field_[s];
    for (int i = 0; i < sites_; ++i) {
      const std::size_t flipped = s ^ ((std::size_t{1} << i) | (std::size_t{1} << ((i + 1) % sites_)));
      ham(position[flipped], c) -= 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ham);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension()));
  for (Eigen::Index i = 0; i < n; ++i)
    psi[static_cast<Eigen::Index>(even[static_cast<std::size_t>(i)])] = solver.eigenvectors()(i, 0);
  return psi;
}

void SpinChain::walsh_hadamard(Eigen::VectorXcd& psi) const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  for (Eigen::Index len = 1; len < dim; len <<= 1)
    for (Eigen::Index i = 0; i < dim; i += len << 1)
      for (Eigen::Index j = i; j < i + len; ++j) {
        const auto a = psi[j], b = psi[j + len];
        psi[j] = a + b;
        psi[j + len] = a - b;
      }
  psi *= std::pow(2.0, -0.5 * sites_);
}

Eigen::VectorXcd SpinChain::evolve(Eigen::VectorXcd psi, const DriveProtocol& drive, std::int64_t cycles,
                                   int steps_per_period) const {
  if (steps_per_period < 1 || cycles < 0)
    throw InvalidArgument("SpinChain::evolve: need steps >= 1 and cycles >= 0");
  const double period = drive.period();
  const double dt = period / steps_per_period;
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 / (2.0 - cbrt2);
  const auto dim = static_cast<Eigen::Index>(dimension());
  const std::complex<double> I(0.0, 1.0);

  auto strang = [&](double t, double tau) {
    const double h = drive.field_at(t + 0.5 * tau);
    for (Eigen::Index s = 0; s < dim; ++s)
      psi[s] *= std::exp(-I * (0.5 * tau * h * zz_field_[static_cast<std::size_t>(s)]));
    walsh_hadamard(psi);
    for (Eigen::Index s = 0; s < dim; ++s)
      psi[s] *= std::exp(-I * (tau * xx_coupling_[static_cast<std::size_t>(s)]));
    walsh_hadamard(psi);
    for (Eigen::Index s = 0; s < dim; ++s)
      psi[s] *= std::exp(-I * (0.5 * tau * h * zz_field_[static_cast<std::size_t>(s)]));
  };

  for (std::int64_t c = 0; c < cycles; ++c)
    for (int step = 0; step < steps_per_period; ++step) {
      const double t = static_cast<double>(c) * period + step * dt;
      strang(t, w1 * dt);
      strang(t + w1 * dt, w0 * dt);
      strang(t + (w1 + w0) * dt, w1 * dt);
    }
  return psi;
}

double SpinChain::block_entropy(const Eigen::VectorXcd& psi, int l) const {
  if (l < 0 || l > sites_)
    throw InvalidArgument("block_entropy: block size out of range");
  if (l == 0 || l == sites_)
    return 0.0;
  const Eigen::Index rows = Eigen::Index{1} << l;
  const Eigen::Index cols = Eigen::Index{1} << (sites_ - l);
  const Eigen::Map<const Eigen::MatrixXcd> m(psi.data(), rows, cols);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  double s = 0.0;
  for (double sigma : svd.singularValues()) {
    const double p = sigma * sigma;
    if (p > 1e-300)
      s -= p * std::log2(p);
  }
  return s;
}

Eigen::VectorXcd SpinChain::annihilate(const Eigen::VectorXcd& psi, int site) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  const std::size_t bit = std::size_t{1} << site;
  for (std::size_t s = 0; s < dimension(); ++s)
    if (s & bit)
      out[static_cast<Eigen::Index>(s ^ bit)] += parity_sign(s, site) * psi[static_cast<Eigen::Index>(s)];
  return out;
}

Eigen::VectorXcd SpinChain::create(const Eigen::VectorXcd& psi, int site) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  const std::size_t bit = std::size_t{1} << site;
  for (std::size_t s = 0; s < dimension(); ++s)
    if (!(s & bit))
      out[static_cast<Eigen::Index>(s | bit)] += parity_sign(s, site) * psi[static_cast<Eigen::Index>(s)];
  return out;
}

SpinChain::Kernels SpinChain::kernels(const Eigen::VectorXcd& psi) const {
  Kernels k;
  const Eigen::VectorXcd c0 = annihilate(psi, 0);
  for (int r = 0; r < sites_; ++r) {
    const Eigen::VectorXcd cr = annihilate(psi, r);
    k.f.push_back(c0.dot(cr));                  // <c_0^+ c_r>
    k.g.push_back(psi.dot(annihilate(cr, 0)));  // <c_0 c_r>
  }
  return k;
}

SpinChain::BlockCorrelators SpinChain::block_correlators(const Eigen::VectorXcd& psi, int l) const {
  BlockCorrelators out{Eigen::MatrixXcd(l, l), Eigen::MatrixXcd(l, l)};
  for (int m = 0; m < l; ++m) {
    const Eigen::VectorXcd cm = annihilate(psi, m);
    const Eigen::VectorXcd cdm = create(psi, m);
    for (int n = 0; n < l; ++n) {
      out.alpha(n, m) = psi.dot(annihilate(cdm, n));
      out.beta(n, m) = psi.dot(annihilate(cm, n));
    }
  }
  return out;
}

}  // namespace tfim::exact
