#pragma once

// Numerical equivalence checks between closed-form SDP optima and the
// trace-normalized diffusion operators:
//
//   entropy, eta       <->  heat kernel H_t,                t = eta
//   log-det, eta       <->  D^{-1/2} R_gamma D^{1/2},        gamma = lambda/(lambda-1)
//   p-norm,  eta       <->  D^{-1/2} W_alpha^{q-1} D^{1/2},  alpha = (lambda-1)/lambda
//
// Both sides are projected to the subspace orthogonal to D^{1/2} 1 and
// normalized by their trace there.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "implreg/diffusion.hpp"
#include "implreg/error.hpp"
#include "implreg/regularizers.hpp"
#include "implreg/sdp_solver.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

enum class Lemma { HeatKernel, PageRank, LazyWalk };

constexpr std::string_view lemma_name(Lemma lemma) {
  switch (lemma) {
    case Lemma::HeatKernel: return "HeatKernel";
    case Lemma::PageRank: return "PageRank";
    case Lemma::LazyWalk: return "LazyWalk";
  }
  return "Unknown";
}

inline constexpr double kEquivalenceTol = 1e-8;
inline constexpr double kParamRoundTripTol = 1e-10;

struct EquivalenceReport {
  Lemma lemma = Lemma::HeatKernel;
  double eta = 0.0;
  /// t, gamma or alpha.
  double diffusion_param = 0.0;
  /// q - 1 for the lazy walk.
  std::optional<double> steps;
  double lambda_star = 0.0;
  /// Diffusion parameter read back from the solver's lambda*.
  std::optional<double> recovered_param;
  double param_roundtrip_error = 0.0;
  double max_abs_deviation = 0.0;
  std::string trace_convention = "subspace";
  double subspace_trace = 0.0;
  double full_space_trace = 0.0;
  /// Lazy walk only: deviation when conjugating by D^{-/+(q-1)/2} instead of
  /// D^{-/+1/2}. Nonzero for q - 1 != 1 on irregular graphs.
  std::optional<double> literal_conjugation_deviation;
  /// Trace-normalized diffusion side and the SDP side, both projected.
  Eigen::MatrixXd diffusion_matrix;
  Eigen::MatrixXd sdp_matrix;
  /// Set when the check could not run; "<ErrorCode>: message".
  std::optional<std::string> error;
  bool pass = false;
};

namespace detail {

inline EquivalenceReport finish(EquivalenceReport rep, const SpectralBasis& basis,
                                const Eigen::MatrixXd& diffusion, const DensityMatrix& x) {
  rep.diffusion_matrix = project_to_subspace(diffusion, basis);
  rep.sdp_matrix = project_to_subspace(x.dense(), basis);
  rep.max_abs_deviation = (rep.diffusion_matrix - rep.sdp_matrix).cwiseAbs().maxCoeff();
  rep.pass = rep.max_abs_deviation <= kEquivalenceTol &&
             rep.param_roundtrip_error <= kParamRoundTripTol;
  return rep;
}

// Subspace part of m normalized to unit subspace trace.
inline Eigen::MatrixXd normalized_on_subspace(const Eigen::MatrixXd& m, const SpectralBasis& basis,
                                              double* trace_out = nullptr) {
  const Eigen::MatrixXd projected = project_to_subspace(m, basis);
  const double tr = projected.trace();
  if (trace_out) *trace_out = tr;
  return projected / tr;
}

}  // namespace detail

/// Entropy-regularized optimum at eta vs H_eta / Tr[H_eta].
inline EquivalenceReport check_heat_kernel_lemma(const GraphSpectrum& spec, double eta) {
  detail::check_eta(eta);
  const SpectralBasis& basis = *spec.basis;
  EquivalenceReport rep;
  rep.lemma = Lemma::HeatKernel;
  rep.eta = eta;
  rep.diffusion_param = eta;

  const Eigen::MatrixXd h = heat_kernel(basis, eta);
  rep.subspace_trace = subspace_trace(h, basis);
  rep.full_space_trace = basis.eigenvalues().unaryExpr([eta](double l) { return std::exp(-eta * l); }).sum();

  const auto sol = solve(spec.basis, Regularizer::entropy(), eta);
  rep.lambda_star = sol.report.lambda_star;
  rep.recovered_param = sol.report.mapped_param;
  rep.param_roundtrip_error = std::abs(*sol.report.mapped_param - eta);
  return detail::finish(std::move(rep), basis, h / rep.subspace_trace, sol.x);
}

/// Log-det optimum at eta = eta_for_gamma vs D^{-1/2} R_gamma D^{1/2}
/// normalized on the subspace.
inline EquivalenceReport check_pagerank_lemma(const GraphSpectrum& spec, double gamma) {
  const SpectralBasis& basis = *spec.basis;
  lambda_from_gamma(gamma);  // range check
  EquivalenceReport rep;
  rep.lemma = Lemma::PageRank;
  rep.diffusion_param = gamma;
  rep.eta = eta_for_gamma(basis, gamma);

  const Eigen::MatrixXd r = pagerank_operator(spec.walk, gamma);
  const Eigen::VectorXd root = spec.graph.sqrt_degrees();
  const Eigen::MatrixXd conj = root.cwiseInverse().asDiagonal() * r * root.asDiagonal();
  rep.full_space_trace = r.trace();
  const Eigen::MatrixXd target = detail::normalized_on_subspace(conj, basis, &rep.subspace_trace);

  const auto sol = solve(spec.basis, Regularizer::log_det(), rep.eta);
  rep.lambda_star = sol.report.lambda_star;
  rep.recovered_param = sol.report.mapped_param;
  rep.param_roundtrip_error = rep.recovered_param
                                  ? std::abs(*rep.recovered_param - gamma)
                                  : std::numeric_limits<double>::infinity();
  return detail::finish(std::move(rep), basis, target, sol.x);
}

/// P-norm optimum (q - 1 = steps) at eta = eta_for_alpha vs
/// D^{-1/2} W_alpha^{steps} D^{1/2} normalized on the subspace. Requires
/// alpha >= 1 - 1/l_max, where the stationary point is PSD.
inline EquivalenceReport check_lazy_walk_lemma(const GraphSpectrum& spec, double alpha,
                                               double steps) {
  const SpectralBasis& basis = *spec.basis;
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    fail(ErrorCode::AlphaOutOfRange,
         "alpha must lie in [0, 1) (alpha = 1 sends lambda to infinity), got " +
             format_double(alpha));
  }
  if (!(steps > 0.0) || !std::isfinite(steps)) {
    fail(ErrorCode::InvalidArgument, "step count q-1 must be finite and > 0");
  }
  const double threshold = lazy_walk_psd_threshold(basis);
  if (alpha < threshold - 1e-12) {
    const bool integer = steps == std::floor(steps);
    fail(integer ? ErrorCode::AlphaBelowPsdThreshold : ErrorCode::AlphaTooSmallForFractionalPower,
         "alpha = " + format_double(alpha) + " is below the PSD threshold 1 - 1/l_max = " +
             format_double(threshold));
  }

  EquivalenceReport rep;
  rep.lemma = Lemma::LazyWalk;
  rep.diffusion_param = alpha;
  rep.steps = steps;
  rep.eta = eta_for_alpha(basis, alpha, steps);

  const Eigen::MatrixXd wk = lazy_walk_power(spec, alpha, steps);
  const Eigen::VectorXd d = spec.graph.degrees();
  const Eigen::VectorXd root = d.array().sqrt().matrix();
  const Eigen::MatrixXd conj = root.cwiseInverse().asDiagonal() * wk * root.asDiagonal();
  rep.full_space_trace = wk.trace();
  const Eigen::MatrixXd target = detail::normalized_on_subspace(conj, basis, &rep.subspace_trace);

  const Eigen::VectorXd left = d.array().pow(-steps / 2.0).matrix();
  const Eigen::VectorXd right = d.array().pow(steps / 2.0).matrix();
  const Eigen::MatrixXd literal =
      detail::normalized_on_subspace(left.asDiagonal() * wk * right.asDiagonal(), basis);

  const auto sol = solve(spec.basis, Regularizer::p_norm_steps(steps), rep.eta);
  rep.lambda_star = sol.report.lambda_star;
  rep.recovered_param = sol.report.mapped_param;
  rep.param_roundtrip_error = rep.recovered_param
                                  ? std::abs(*rep.recovered_param - alpha)
                                  : std::numeric_limits<double>::infinity();
  rep = detail::finish(std::move(rep), basis, target, sol.x);
  rep.literal_conjugation_deviation = (literal - rep.sdp_matrix).cwiseAbs().maxCoeff();
  return rep;
}

struct SuiteConfig {
  std::vector<double> etas{0.01, 0.1, 1.0, 10.0};
  std::vector<double> gammas{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> alphas{0.55, 0.7, 0.9};
  std::vector<double> steps{1.0, 1.5, 2.0, 3.0};
};

/// Runs every configured check; failures become entries with `error` set.
/// Output order: heat kernel by eta, PageRank by gamma, lazy walk by
/// (alpha, steps).
inline std::vector<EquivalenceReport> full_suite(const GraphSpectrum& spec,
                                                 const SuiteConfig& cfg = {}) {
  std::vector<EquivalenceReport> out;
  auto guarded = [&](Lemma lemma, double param, std::optional<double> steps, auto&& run) {
    try {
      out.push_back(run());
    } catch (const Error& e) {
      EquivalenceReport rep;
      rep.lemma = lemma;
      rep.diffusion_param = param;
      rep.steps = steps;
      rep.eta = std::nan("");
      rep.max_abs_deviation = std::nan("");
      rep.error = std::string(code_name(e.code())) + ": " + e.what();
      rep.pass = false;
      out.push_back(std::move(rep));
    }
  };
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  for (double eta : sorted(cfg.etas)) {
    guarded(Lemma::HeatKernel, eta, std::nullopt,
            [&] { return check_heat_kernel_lemma(spec, eta); });
  }
  for (double gamma : sorted(cfg.gammas)) {
    guarded(Lemma::PageRank, gamma, std::nullopt, [&] { return check_pagerank_lemma(spec, gamma); });
  }
  for (double alpha : sorted(cfg.alphas)) {
    for (double s : sorted(cfg.steps)) {
      guarded(Lemma::LazyWalk, alpha, s, [&] { return check_lazy_walk_lemma(spec, alpha, s); });
    }
  }
  return out;
}

}  // namespace implreg
