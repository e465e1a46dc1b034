#pragma once

// Independent numerical oracle for the regularized SDP. Because F is
// rotation invariant and strictly convex, the optimum is diagonal in L's
// eigenbasis, so the SDP reduces to
//
//   min_mu  sum_i l_i mu_i + (1/eta) F(mu)   over the probability simplex.
//
// This is minimized by descent on the primal alone: it never touches the
// inverse gradient or the multiplier lambda used by solve().

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/random.hpp"
#include "implreg/regularizers.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

struct OracleConfig {
  int restarts = 10;
  int max_iterations = 5000;
  /// Stop once ||mu - Proj_simplex(mu - grad f(mu))||_inf drops below this.
  double tolerance = 1e-7;
  std::uint64_t seed = 20240611;
};

struct OracleResult {
  Eigen::VectorXd weights;
  double objective = 0.0;
  int iterations = 0;
  /// Largest weight difference between any restart and the best one.
  double restart_spread = 0.0;
};

/// Euclidean projection onto {x >= 0, sum x = 1} (sort-based).
inline Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  Eigen::VectorXd sorted = y;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < sorted.size(); ++k) {
    cumulative += sorted(k);
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted(k) - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

namespace detail {

// argmin_x sum_i h_i (x_i - y_i)^2 over the simplex: x_i = max(y_i + nu/h_i, 0)
// with nu fixed by sum x = 1 (the sum is nondecreasing in nu).
inline Eigen::VectorXd project_to_simplex_scaled(const Eigen::VectorXd& y,
                                                 const Eigen::VectorXd& h) {
  auto mass = [&](double nu) { return (y.array() + nu / h.array()).max(0.0).sum(); };
  double lo = -1.0, hi = 1.0;
  while (mass(lo) > 1.0) lo *= 2.0;
  while (mass(hi) < 1.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  Eigen::VectorXd x = (y.array() + hi / h.array()).max(0.0).matrix();
  return x / x.sum();
}

inline bool in_domain(const Regularizer& r, const Eigen::VectorXd& mu) {
  // Entropy and log-det optima are interior; keep iterates strictly positive.
  if (r.kind() == RegularizerKind::PNorm) return mu.minCoeff() >= 0.0;
  return mu.minCoeff() > 0.0;
}

}  // namespace detail

/// Descent on the simplex from seeded random interior restarts. Each step
/// takes the better of a projected Newton step (diagonal Hessian metric,
/// Armijo along the feasible segment) and a projected-gradient arc step. Throws
/// NonConvergence if the best restart does not reach the tolerance.
inline OracleResult oracle_solve(const Eigen::VectorXd& eigenvalues, const Regularizer& r,
                                 double eta, const OracleConfig& cfg = {}) {
  if (!(eta > 0.0)) fail(ErrorCode::EtaNonPositive, "eta must be > 0");
  const Eigen::Index m = eigenvalues.size();
  if (m > 50) fail(ErrorCode::InvalidArgument, "oracle is limited to subspace dimension <= 50");

  auto objective = [&](const Eigen::VectorXd& mu) {
    return eigenvalues.dot(mu) + value(r, mu) / eta;
  };
  auto gradient = [&](const Eigen::VectorXd& mu) {
    Eigen::VectorXd g(m);
    for (Eigen::Index i = 0; i < m; ++i) g(i) = eigenvalues(i) + grad_scalar(r, mu(i)) / eta;
    return g;
  };
  auto stationarity = [&](const Eigen::VectorXd& mu, const Eigen::VectorXd& g) {
    return (mu - project_to_simplex(mu - g)).cwiseAbs().maxCoeff();
  };

  Rng rng(cfg.seed);
  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> finals;

  for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
    // Interior start: half uniform, half a flat-Dirichlet draw.
    Eigen::VectorXd mu(m);
    for (Eigen::Index i = 0; i < m; ++i) mu(i) = -std::log(1.0 - rng.uniform());
    mu = 0.5 * mu / mu.sum() + Eigen::VectorXd::Constant(m, 0.5 / static_cast<double>(m));

    double f = objective(mu);
    double residual = std::numeric_limits<double>::infinity();
    double arc_step = 1.0;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
      const Eigen::VectorXd g = gradient(mu);
      residual = stationarity(mu, g);
      if (residual <= cfg.tolerance) break;

      // Candidate 1: projected Newton step with Armijo backtracking.
      Eigen::VectorXd h(m);
      for (Eigen::Index i = 0; i < m; ++i) h(i) = hessian_scalar(r, mu(i)) / eta;
      const double h_floor = 1e-12 * std::max(1.0, h.maxCoeff());
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!(h(i) > h_floor) || !std::isfinite(h(i))) h(i) = std::isfinite(h(i)) ? h_floor : 1e300;
      }
      const Eigen::VectorXd target =
          detail::project_to_simplex_scaled(mu - g.cwiseQuotient(h), h);
      const Eigen::VectorXd dir = target - mu;
      const double slope = g.dot(dir);
      // Objective values carry roundoff proportional to their size.
      const double noise = 1e-15 * (1.0 + std::abs(f));

      Eigen::VectorXd next = mu;
      double f_next = f;
      if (slope < 0.0 && -slope <= 1e3 * noise) {
        // Predicted decrease is lost in roundoff: judge the full Newton step
        // by the stationarity residual instead.
        if (detail::in_domain(r, target) && stationarity(target, gradient(target)) < residual) {
          next = target;
          f_next = objective(target);
        }
      } else if (slope < 0.0) {
        double step = 1.0;
        for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
          const Eigen::VectorXd trial = mu + step * dir;
          if (!detail::in_domain(r, trial)) continue;
          const double ft = objective(trial);
          if (ft <= f + 1e-4 * step * slope + noise) {
            next = trial;
            f_next = ft;
            break;
          }
        }
      }

      // Candidate 2: Euclidean projected-gradient arc. The diagonal Hessian
      // blows up near the boundary for p < 2, where Newton steps stall.
      for (int ls = 0; ls < 80; ++ls, arc_step *= 0.5) {
        const Eigen::VectorXd trial = project_to_simplex(mu - arc_step * g);
        if (!detail::in_domain(r, trial)) continue;
        const double ft = objective(trial);
        if (ft <= f + 1e-4 * g.dot(trial - mu) + noise) {
          if (next == mu || ft < f_next - noise) {
            next = trial;
            f_next = ft;
          }
          break;
        }
      }
      arc_step = std::min(2.0 * arc_step, 1e12);

      if (next == mu) break;  // no progress left at this precision
      mu = next;
      f = f_next;
    }
    best.iterations += it;
    finals.push_back(mu);
    if (f < best.objective || (f == best.objective && residual < best_residual)) {
      best.objective = f;
      best.weights = mu;
      best_residual = std::min(residual, stationarity(mu, gradient(mu)));
    }
  }
  for (const auto& w : finals) {
    best.restart_spread = std::max(best.restart_spread, (w - best.weights).cwiseAbs().maxCoeff());
  }
  if (!(best_residual <= cfg.tolerance)) {
    fail(ErrorCode::NonConvergence,
         "projected-gradient residual " + format_double(best_residual) + " above tolerance " +
             format_double(cfg.tolerance));
  }
  return best;
}

inline OracleResult oracle_solve(const SpectralBasis& basis, const Regularizer& r, double eta,
                                 const OracleConfig& cfg = {}) {
  return oracle_solve(basis.nontrivial_eigenvalues(), r, eta, cfg);
}

}  // namespace implreg
