#pragma once

// Heat kernel, PageRank and lazy random walk operators, plus the
// unnormalized power-iteration trajectory of the symmetrized lazy walk.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/format.hpp"
#include "implreg/graph.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

/// exp(-t L) restricted to the nontrivial subspace.
inline Eigen::MatrixXd heat_kernel(const SpectralBasis& basis, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::NegativeTime, "heat time must be finite and >= 0, got " + format_double(t));
  }
  return apply_spectral_function(basis, [t](double l) { return std::exp(-t * l); });
}

namespace detail {

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    fail(ErrorCode::GammaOutOfRange, "gamma must lie in (0, 1], got " + format_double(gamma));
  }
}

inline void check_preference(const Eigen::VectorXd& s, Eigen::Index n) {
  if (s.size() != n) {
    fail(ErrorCode::BadPreferenceVector,
         "preference vector has " + std::to_string(s.size()) + " entries, expected " +
             std::to_string(n));
  }
  if (!s.allFinite() || s.minCoeff() < 0.0) {
    fail(ErrorCode::BadPreferenceVector, "preference vector must be finite and nonnegative");
  }
  if (std::abs(s.sum() - 1.0) > 1e-10) {
    fail(ErrorCode::BadPreferenceVector,
         "preference vector sums to " + format_double(s.sum()) + ", expected 1");
  }
}

// Solves (I - c T) x = rhs for a column-stochastic T and c in [0, 1).
inline Eigen::MatrixXd resolvent_solve(const Eigen::MatrixXd& T, double c,
                                       const Eigen::MatrixXd& rhs) {
  const Eigen::Index n = T.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - c * T);
  if (!(lu.rcond() > 1e-14)) {
    fail(ErrorCode::SingularResolvent, "I - (1 - gamma) M is numerically singular");
  }
  return lu.solve(rhs);
}

}  // namespace detail

/// R_gamma = gamma (I - (1 - gamma) M)^{-1} on the full space. gamma = 1
/// returns the identity.
inline Eigen::MatrixXd pagerank_operator(const WalkMatrices& walk, double gamma) {
  detail::check_gamma(gamma);
  const Eigen::Index n = walk.M.rows();
  if (gamma == 1.0) return Eigen::MatrixXd::Identity(n, n);
  return gamma * detail::resolvent_solve(walk.M, 1.0 - gamma, Eigen::MatrixXd::Identity(n, n));
}

inline Eigen::MatrixXd pagerank_operator(const Graph& g, double gamma) {
  return pagerank_operator(build_walk_matrices(g), gamma);
}

/// Unique solution of pi = gamma s + (1 - gamma) M pi.
inline Eigen::VectorXd pagerank_vector(const WalkMatrices& walk, double gamma,
                                       const Eigen::VectorXd& s) {
  detail::check_gamma(gamma);
  detail::check_preference(s, walk.M.rows());
  if (gamma == 1.0) return s;
  return detail::resolvent_solve(walk.M, 1.0 - gamma, gamma * s);
}

inline Eigen::VectorXd pagerank_vector(const Graph& g, double gamma, const Eigen::VectorXd& s) {
  return pagerank_vector(build_walk_matrices(g), gamma, s);
}

/// Unique solution of pi = gamma s + (1 - gamma) W pi with W = (I + M) / 2.
inline Eigen::VectorXd lazy_pagerank_vector(const WalkMatrices& walk, double gamma,
                                            const Eigen::VectorXd& s) {
  detail::check_gamma(gamma);
  detail::check_preference(s, walk.M.rows());
  if (gamma == 1.0) return s;
  const Eigen::Index n = walk.M.rows();
  const Eigen::MatrixXd lazy = 0.5 * (Eigen::MatrixXd::Identity(n, n) + walk.M);
  return detail::resolvent_solve(lazy, 1.0 - gamma, gamma * s);
}

inline Eigen::VectorXd lazy_pagerank_vector(const Graph& g, double gamma,
                                            const Eigen::VectorXd& s) {
  return lazy_pagerank_vector(build_walk_matrices(g), gamma, s);
}

/// Smallest alpha for which I - (1 - alpha) L is PSD on the subspace.
inline double lazy_walk_psd_threshold(const SpectralBasis& basis) {
  return 1.0 - 1.0 / basis.largest();
}

/// W_alpha^k = D^{1/2} (W'_alpha)^k D^{-1/2}, where W'_alpha = I - (1 - alpha) L.
/// The trivial direction is kept (its W' eigenvalue is exactly 1), so integer
/// k reproduces the literal matrix power. Non-integer k requires W' to be PSD
/// on the subspace.
inline Eigen::MatrixXd lazy_walk_power(const GraphSpectrum& spec, double alpha, double k) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + format_double(alpha));
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    fail(ErrorCode::InvalidArgument, "step count must be finite and >= 0, got " + format_double(k));
  }
  const SpectralBasis& basis = *spec.basis;
  const bool integer = (k == std::floor(k));
  Eigen::VectorXd powered(basis.n());
  for (Eigen::Index i = 0; i < basis.n(); ++i) {
    double w = (i == basis.trivial_index()) ? 1.0 : 1.0 - (1.0 - alpha) * basis.eigenvalues()(i);
    if (!integer) {
      if (w < -1e-10) {
        fail(ErrorCode::NegativeEigenvalueFractionalPower,
             "symmetrized lazy walk has eigenvalue " + format_double(w) +
                 " < 0; fractional power " + format_double(k) + " is undefined");
      }
      if (w < 0.0) w = 0.0;
    }
    powered(i) = std::pow(w, k);
  }
  const Eigen::MatrixXd& V = basis.eigenvectors();
  const Eigen::MatrixXd sym = V * powered.asDiagonal() * V.transpose();
  const Eigen::VectorXd root = spec.graph.sqrt_degrees();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  return root.asDiagonal() * sym * inv_root.asDiagonal();
}

inline Eigen::MatrixXd lazy_walk_power(const Graph& g, double alpha, double k) {
  return lazy_walk_power(analyze(g), alpha, k);
}

struct PowerStep {
  int step = 0;
  Eigen::VectorXd vector;
  /// u^T L u / u^T u where u is P v0 pushed through the same steps (kept
  /// apart from v so the dominant trivial part never cancels); NaN when v0
  /// has no nontrivial part.
  double rayleigh = 0.0;
};

/// v0, W' v0, ..., W'^k v0 with W' = I - (1 - alpha) L and no renormalization.
inline std::vector<PowerStep> power_demo(const GraphSpectrum& spec, double alpha, int k,
                                         const Eigen::VectorXd& v0) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1], got " + format_double(alpha));
  }
  if (k < 0) fail(ErrorCode::InvalidArgument, "step count must be >= 0");
  const Eigen::Index n = spec.walk.L.rows();
  if (v0.size() != n) fail(ErrorCode::InvalidArgument, "start vector has the wrong length");
  if (!v0.allFinite() || v0.squaredNorm() == 0.0) {
    fail(ErrorCode::ZeroStartVector, "start vector must be finite and nonzero");
  }
  const Eigen::MatrixXd walk = Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * spec.walk.L;
  const Eigen::VectorXd v0_trivial = spec.basis->trivial_vector();

  // The Rayleigh quotient follows the projected component u_k = P W'^k v0 =
  // W'^k P v0 on its own track. Projecting the raw iterate instead would lose
  // u_k to cancellation once the trivial component dominates.
  auto project = [&](Eigen::VectorXd v) {
    v -= v0_trivial * v0_trivial.dot(v);
    return v;
  };
  auto rayleigh = [&](const Eigen::VectorXd& u) {
    const double norm2 = u.squaredNorm();
    if (norm2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return u.dot(spec.walk.L * u) / norm2;
  };

  std::vector<PowerStep> out;
  out.reserve(static_cast<std::size_t>(k) + 1);
  Eigen::VectorXd v = v0;
  Eigen::VectorXd u = project(v0);
  if (u.norm() <= 1e-14 * v0.norm()) u.setZero();  // v0 is (numerically) trivial
  out.push_back({0, v, rayleigh(u)});
  for (int step = 1; step <= k; ++step) {
    v = walk * v;
    u = project(walk * u);
    out.push_back({step, v, rayleigh(u)});
  }
  return out;
}

}  // namespace implreg
