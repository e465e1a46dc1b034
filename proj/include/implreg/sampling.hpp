#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/random.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

struct SampleConfig {
  std::uint64_t seed = 0;
  int count = 1;
};

struct SpectralSolution {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// min x^T L x subject to x^T x = 1 and x^T D^{1/2} 1 = 0: the smallest
/// nontrivial eigenpair (sign-fixed by decompose()).
inline SpectralSolution spectral_solve(const SpectralBasis& basis) {
  Eigen::Index best = 0;
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  for (Eigen::Index i = 1; i < l.size(); ++i)
    if (l(i) < l(best)) best = i;
  return {l(best), basis.nontrivial_vectors().col(best)};
}

/// x = X^{1/2} xi with xi_j i.i.d. N(0, 1/n), n the node count. The second
/// moment of x is therefore X / n.
inline std::vector<Eigen::VectorXd> sample_vectors(const DensityMatrix& x, const SampleConfig& cfg) {
  if (cfg.count < 1) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const Eigen::MatrixXd root = x.sqrt();
  const Eigen::Index n = root.rows();
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  Rng rng(cfg.seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(cfg.count));
  Eigen::VectorXd xi(n);
  for (int s = 0; s < cfg.count; ++s) {
    for (Eigen::Index j = 0; j < n; ++j) xi(j) = sd * rng.gaussian();
    out.push_back(root * xi);
  }
  return out;
}

}  // namespace implreg
