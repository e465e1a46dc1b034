#pragma once

// Closed-form solution of the regularized spectral SDP
//
//   min  L . X + (1/eta) F(X)   s.t.  I . X = 1,  X PSD
//
// on the nontrivial subspace. Stationarity of the Lagrangian gives
// X = (grad F)^{-1}(eta (lambda I - L)); lambda* is fixed by the unit-trace
// condition. Everything is done in L's eigenbasis, where X is diagonal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/format.hpp"
#include "implreg/regularizers.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

struct SolveReport {
  RegularizerKind kind = RegularizerKind::Entropy;
  double p = 0.0;  // p-norm only
  double eta = 0.0;
  double lambda_star = 0.0;
  Eigen::VectorXd weights;
  /// "t", "gamma" or "alpha".
  std::string mapped_param_name;
  /// Empty when lambda* falls outside the range of the parameter map
  /// (log-det with lambda* >= 0).
  std::optional<double> mapped_param;
  double trace_residual = 0.0;
  double psd_margin = 0.0;
  double objective = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  int bisection_iterations = 0;
};

struct SolveResult {
  DensityMatrix x;
  SolveReport report;
};

/// sum_i (grad F)^{-1}(eta (lambda - l_i)), the trace of X(lambda).
inline double trace_at(const SpectralBasis& basis, const Regularizer& r, double eta,
                       double lambda) {
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) acc += grad_inverse_scalar(r, eta * (lambda - l(i)));
  return acc;
}

inline Eigen::VectorXd weights_at(const SpectralBasis& basis, const Regularizer& r, double eta,
                                  double lambda) {
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  Eigen::VectorXd mu(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) mu(i) = grad_inverse_scalar(r, eta * (lambda - l(i)));
  return mu;
}

/// L . X + (1/eta) F(X) for X given by its weights.
inline double primal_value(const SpectralBasis& basis, const Regularizer& r, double eta,
                           const Eigen::VectorXd& mu) {
  return basis.nontrivial_eigenvalues().dot(mu) + value(r, mu) / eta;
}

/// Lagrangian dual h(lambda, U = 0), evaluated at its minimizer
/// X(lambda) = (grad F)^{-1}(eta (lambda I - L)). Throws RangeError outside
/// the admissible lambda range of r.
inline double dual_value(const SpectralBasis& basis, const Regularizer& r, double eta,
                         double lambda) {
  const Eigen::VectorXd mu = weights_at(basis, r, eta, lambda);
  return primal_value(basis, r, eta, mu) - lambda * (mu.sum() - 1.0);
}

namespace detail {

inline void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    fail(ErrorCode::EtaNonPositive, "eta must be finite and > 0, got " + format_double(eta));
  }
}

struct Bisection {
  double lambda;
  int iterations;
};

// Root of trace(lambda) = 1 on [lo, hi] for an increasing trace with
// trace(lo) <= 1 <= trace(hi). Runs until the bracket cannot shrink further.
template <class Trace>
Bisection bisect_unit_trace(Trace&& trace, double lo, double hi) {
  const double t_lo = trace(lo);
  const double t_hi = trace(hi);
  if (!(t_lo <= 1.0 && t_hi >= 1.0)) {
    fail(ErrorCode::BisectionFailure,
         "unit trace not bracketed: trace(" + format_double(lo) + ") = " + format_double(t_lo) +
             ", trace(" + format_double(hi) + ") = " + format_double(t_hi));
  }
  // Monotonicity spot check over the bracket.
  double prev = t_lo;
  for (int k = 1; k <= 16; ++k) {
    const double t = trace(lo + (hi - lo) * k / 16.0);
    if (t < prev) throw std::logic_error("unit-trace function is not monotone on the bracket");
    prev = t;
  }
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double t = trace(mid);
    if (t == 1.0) return {mid, it + 1};
    (t < 1.0 ? lo : hi) = mid;
  }
  // Pick whichever endpoint has the smaller residual.
  const double r_lo = std::abs(trace(lo) - 1.0);
  const double r_hi = std::abs(trace(hi) - 1.0);
  return {r_lo <= r_hi ? lo : hi, it};
}

inline constexpr double kBracketSlack = 1e-9;

}  // namespace detail

/// Solves the (F, eta)-regularized SDP.
///
/// Entropy uses lambda* = l_min - (1/eta) log sum exp(-eta (l_i - l_min)).
/// Log-det bisects on lambda < l_min over the bracket
/// [l_min - m/eta, l_min - 1/eta] (m = n - 1), which always contains the
/// root. P-norm bisects on lambda >= l_max over [l_max, l_min + 1/eta]. Both
/// brackets are widened by a relative 1e-9 so that roundoff cannot push the
/// root outside when it sits on an endpoint (single or repeated eigenvalue). If the
/// trace already exceeds one at l_max no PSD stationary point exists (the
/// optimum sits on the cone boundary) and BisectionFailure is thrown.
inline SolveResult solve(const BasisPtr& basis_ptr, const Regularizer& r, double eta) {
  detail::check_eta(eta);
  const SpectralBasis& basis = *basis_ptr;
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  const double m = static_cast<double>(l.size());
  const double l_min = l.minCoeff();
  const double l_max = l.maxCoeff();
  auto trace = [&](double lambda) { return trace_at(basis, r, eta, lambda); };

  SolveReport rep;
  rep.kind = r.kind();
  rep.p = r.kind() == RegularizerKind::PNorm ? r.p() : 0.0;
  rep.eta = eta;

  switch (r.kind()) {
    case RegularizerKind::Entropy: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < l.size(); ++i) s += std::exp(-eta * (l(i) - l_min));
      rep.lambda_star = l_min - std::log(s) / eta;
      rep.mapped_param_name = "t";
      rep.mapped_param = eta;
      break;
    }
    case RegularizerKind::LogDet: {
      const auto root = detail::bisect_unit_trace(trace, l_min - (m / eta) * (1.0 + detail::kBracketSlack),
                                                  l_min - (1.0 / eta) * (1.0 - detail::kBracketSlack));
      rep.lambda_star = root.lambda;
      rep.bisection_iterations = root.iterations;
      rep.mapped_param_name = "gamma";
      // lambda* = 0 is the gamma -> 0 limit, where the resolvent is singular.
      // Values within roundoff of it are treated as that limit.
      const double zero_tol = 64.0 * std::numeric_limits<double>::epsilon() * (l_max + m / eta);
      if (rep.lambda_star < -zero_tol) rep.mapped_param = gamma_from_lambda(rep.lambda_star);
      break;
    }
    case RegularizerKind::PNorm: {
      const double at_edge = trace(l_max);
      if (at_edge > 1.0 + 1e-12) {
        fail(ErrorCode::BisectionFailure,
             "p-norm: trace at lambda = l_max = " + format_double(l_max) + " is " +
                 format_double(at_edge) +
                 " > 1, so no lambda gives a PSD unit-trace stationary point (eta = " +
                 format_double(eta) + ", p = " + format_double(r.p()) + ")");
      }
      if (at_edge >= 1.0) {
        rep.lambda_star = l_max;
      } else {
        const auto root =
            detail::bisect_unit_trace(trace, l_max,
                                      std::max(l_max, l_min + (1.0 / eta) * (1.0 + detail::kBracketSlack)));
        rep.lambda_star = root.lambda;
        rep.bisection_iterations = root.iterations;
      }
      rep.mapped_param_name = "alpha";
      if (rep.lambda_star >= 1.0) rep.mapped_param = alpha_from_lambda(rep.lambda_star);
      break;
    }
  }

  Eigen::VectorXd mu = weights_at(basis, r, eta, rep.lambda_star);
  rep.trace_residual = std::abs(mu.sum() - 1.0);
  DensityMatrix x = density_from_weights(basis_ptr, std::move(mu));
  rep.weights = x.weights();
  rep.psd_margin = rep.weights.minCoeff();
  rep.objective = x.objective();
  rep.primal_value = primal_value(basis, r, eta, rep.weights);
  rep.dual_value = dual_value(basis, r, eta, rep.lambda_star);
  rep.duality_gap = rep.primal_value - rep.dual_value;
  return {std::move(x), std::move(rep)};
}

struct Certificate {
  double lambda_candidate = 0.0;
  /// max - min over i of grad F(mu_i) / eta + l_i; zero iff condition 1 holds.
  double lambda_spread = 0.0;
  double trace_residual = 0.0;
  double psd_margin = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  bool pass = false;
};

inline constexpr double kCertLambdaSpreadTol = 1e-8;
inline constexpr double kCertTraceTol = 1e-10;
inline constexpr double kCertPsdTol = -1e-12;
inline constexpr double kCertGapTol = 1e-8;

/// Checks the three sufficient optimality conditions for a candidate X and
/// the duality gap against h(lambda_candidate, 0), where lambda_candidate is
/// the mean of the per-eigenvalue multipliers implied by condition 1.
inline Certificate verify_optimality(const SpectralBasis& basis, const Regularizer& r, double eta,
                                     const DensityMatrix& x) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  const Eigen::VectorXd& mu = x.weights();
  Certificate c;
  c.trace_residual = std::abs(mu.sum() - 1.0);
  c.psd_margin = mu.minCoeff();

  bool finite = true;
  double lo = inf, hi = -inf, sum = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double cand;
    try {
      cand = grad_scalar(r, mu(i)) / eta + l(i);
    } catch (const Error&) {
      finite = false;
      continue;
    }
    lo = std::min(lo, cand);
    hi = std::max(hi, cand);
    sum += cand;
  }
  c.lambda_spread = finite ? hi - lo : inf;
  c.lambda_candidate = finite ? sum / static_cast<double>(mu.size()) : std::nan("");

  try {
    c.primal_value = primal_value(basis, r, eta, mu);
  } catch (const Error&) {
    c.primal_value = inf;
  }
  try {
    c.dual_value = finite ? dual_value(basis, r, eta, c.lambda_candidate) : -inf;
  } catch (const Error&) {
    c.dual_value = -inf;
  }
  c.duality_gap = c.primal_value - c.dual_value;
  c.pass = c.lambda_spread <= kCertLambdaSpreadTol && c.trace_residual <= kCertTraceTol &&
           c.psd_margin >= kCertPsdTol && c.duality_gap <= kCertGapTol;
  return c;
}

}  // namespace implreg
