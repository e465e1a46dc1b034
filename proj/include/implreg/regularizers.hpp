#pragma once

// Spectral regularizers F on the PSD cone, evaluated on eigenvalue weights
// (all three are rotation invariant), and the maps between the Lagrange
// multiplier lambda and the diffusion parameters gamma and alpha.
//
//   entropy  F(X) = Tr(X log X) - Tr(X)   grad = log X      grad^-1 = exp Y
//   log-det  F(X) = -log det X            grad = -X^-1      grad^-1 = -Y^-1
//   p-norm   F(X) = Tr(X^p) / p           grad = X^(p-1)    grad^-1 = Y^(q-1)

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/format.hpp"
#include "implreg/spectral.hpp"

namespace implreg {

enum class RegularizerKind { Entropy, LogDet, PNorm };

constexpr std::string_view kind_name(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::Entropy: return "entropy";
    case RegularizerKind::LogDet: return "logdet";
    case RegularizerKind::PNorm: return "pnorm";
  }
  return "unknown";
}

class Regularizer {
 public:
  static Regularizer entropy() { return Regularizer(RegularizerKind::Entropy, 0.0, 0.0); }
  static Regularizer log_det() { return Regularizer(RegularizerKind::LogDet, 0.0, 0.0); }

  /// p > 1, q = p / (p - 1).
  static Regularizer p_norm(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      fail(ErrorCode::InvalidArgument, "p-norm needs finite p > 1, got " + format_double(p));
    }
    return Regularizer(RegularizerKind::PNorm, p, p / (p - 1.0));
  }

  /// p-norm whose inverse gradient is the `steps`-th power (steps = q - 1),
  /// keeping the step count exact instead of round-tripping through p.
  static Regularizer p_norm_steps(double steps) {
    if (!(steps > 0.0) || !std::isfinite(steps)) {
      fail(ErrorCode::InvalidArgument, "step count q-1 must be finite and > 0");
    }
    return Regularizer(RegularizerKind::PNorm, 1.0 + 1.0 / steps, 1.0 + steps);
  }

  RegularizerKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  /// q - 1, the exponent of the inverse gradient (p-norm only).
  double steps() const noexcept { return q_ - 1.0; }

 private:
  Regularizer(RegularizerKind kind, double p, double q) : kind_(kind), p_(p), q_(q) {}

  RegularizerKind kind_;
  double p_;
  double q_;
};

namespace detail {

[[noreturn]] inline void domain_fail(const Regularizer& r, double mu) {
  fail(ErrorCode::DomainError, std::string(kind_name(r.kind())) + " is undefined at weight " +
                                   format_double(mu));
}

}  // namespace detail

inline double value(const Regularizer& r, const Eigen::VectorXd& mu) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double m = mu(i);
    switch (r.kind()) {
      case RegularizerKind::Entropy:
        if (m < 0.0) detail::domain_fail(r, m);
        acc += (m > 0.0 ? m * std::log(m) : 0.0) - m;
        break;
      case RegularizerKind::LogDet:
        if (!(m > 0.0)) detail::domain_fail(r, m);
        acc -= std::log(m);
        break;
      case RegularizerKind::PNorm:
        if (m < 0.0) detail::domain_fail(r, m);
        acc += std::pow(m, r.p()) / r.p();
        break;
    }
  }
  return acc;
}

inline double grad_scalar(const Regularizer& r, double m) {
  switch (r.kind()) {
    case RegularizerKind::Entropy:
      if (!(m > 0.0)) detail::domain_fail(r, m);
      return std::log(m);
    case RegularizerKind::LogDet:
      if (!(m > 0.0)) detail::domain_fail(r, m);
      return -1.0 / m;
    case RegularizerKind::PNorm:
      if (m < 0.0) detail::domain_fail(r, m);
      return std::pow(m, r.p() - 1.0);
  }
  return 0.0;
}

inline double grad_inverse_scalar(const Regularizer& r, double y) {
  switch (r.kind()) {
    case RegularizerKind::Entropy:
      return std::exp(y);
    case RegularizerKind::LogDet:
      if (!(y < 0.0)) {
        fail(ErrorCode::RangeError, "log-det inverse gradient needs y < 0, got " + format_double(y));
      }
      return -1.0 / y;
    case RegularizerKind::PNorm:
      if (!(y >= 0.0)) {
        fail(ErrorCode::RangeError, "p-norm inverse gradient needs y >= 0, got " + format_double(y));
      }
      return std::pow(y, r.steps());
  }
  return 0.0;
}

/// Diagonal of the Hessian in eigen-coordinates (F is separable there).
inline double hessian_scalar(const Regularizer& r, double m) {
  switch (r.kind()) {
    case RegularizerKind::Entropy: return 1.0 / m;
    case RegularizerKind::LogDet: return 1.0 / (m * m);
    case RegularizerKind::PNorm: return (r.p() - 1.0) * std::pow(m, r.p() - 2.0);
  }
  return 0.0;
}

inline Eigen::VectorXd grad(const Regularizer& r, const Eigen::VectorXd& mu) {
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) out(i) = grad_scalar(r, mu(i));
  return out;
}

inline Eigen::VectorXd grad_inverse(const Regularizer& r, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = grad_inverse_scalar(r, y(i));
  return out;
}

/// F of a dense operator living on the nontrivial subspace, through its
/// eigenvalues in that subspace. Only used to cross-check the weight form.
inline double matrix_value(const Regularizer& r, const Eigen::MatrixXd& x,
                           const SpectralBasis& basis) {
  const Eigen::MatrixXd& v = basis.nontrivial_vectors();
  const Eigen::MatrixXd reduced = v.transpose() * x * v;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced, Eigen::EigenvaluesOnly);
  return value(r, solver.eigenvalues());
}

// ---- lambda <-> diffusion parameter maps --------------------------------

/// gamma = lambda / (lambda - 1), decreasing from 1 to 0 as lambda goes from
/// -inf to 0.
inline double gamma_from_lambda(double lambda) {
  if (!(lambda < 0.0)) {
    fail(ErrorCode::LambdaOutOfRange, "gamma needs lambda < 0, got " + format_double(lambda));
  }
  return lambda / (lambda - 1.0);
}

inline double lambda_from_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    fail(ErrorCode::GammaOutOfRange, "gamma must lie in (0, 1), got " + format_double(gamma));
  }
  return gamma / (gamma - 1.0);
}

/// alpha = (lambda - 1) / lambda, increasing from 0 to 1 as lambda goes from
/// 1 to inf.
inline double alpha_from_lambda(double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::LambdaOutOfRange, "alpha needs lambda >= 1, got " + format_double(lambda));
  }
  return (lambda - 1.0) / lambda;
}

inline double lambda_from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1), got " + format_double(alpha));
  }
  return 1.0 / (1.0 - alpha);
}

/// eta = (1 - gamma) Tr[(I - (1 - gamma) M)^{-1}] with the trace on the
/// nontrivial subspace; there the resolvent has eigenvalues
/// 1 / (gamma + (1 - gamma) l_i).
inline double eta_for_gamma(const SpectralBasis& basis, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    fail(ErrorCode::GammaOutOfRange, "gamma must lie in (0, 1), got " + format_double(gamma));
  }
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) trace += 1.0 / (gamma + (1.0 - gamma) * l(i));
  return (1.0 - gamma) * trace;
}

/// Subspace trace of (W'_alpha)^steps, W' = I - (1 - alpha) L.
inline double lazy_walk_subspace_trace(const SpectralBasis& basis, double alpha, double steps) {
  const bool integer = (steps == std::floor(steps));
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    double w = 1.0 - (1.0 - alpha) * l(i);
    if (!integer) {
      if (w < -1e-10) {
        fail(ErrorCode::AlphaTooSmallForFractionalPower,
             "alpha = " + format_double(alpha) + " leaves a negative walk eigenvalue " +
                 format_double(w) + " under fractional power " + format_double(steps));
      }
      if (w < 0.0) w = 0.0;
    }
    trace += std::pow(w, steps);
  }
  return trace;
}

/// eta = (1 - alpha) {Tr[W_alpha^(q-1)]}^(1-p), trace on the nontrivial
/// subspace; 1 - p = -1 / (q - 1).
inline double eta_for_alpha(const SpectralBasis& basis, double alpha, double steps) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1), got " + format_double(alpha));
  }
  if (!(steps > 0.0) || !std::isfinite(steps)) {
    fail(ErrorCode::InvalidArgument, "step count q-1 must be finite and > 0");
  }
  const double trace = lazy_walk_subspace_trace(basis, alpha, steps);
  if (!(trace > 0.0)) {
    fail(ErrorCode::AlphaBelowPsdThreshold,
         "walk power has non-positive subspace trace " + format_double(trace));
  }
  return (1.0 - alpha) * std::pow(trace, -1.0 / steps);
}

}  // namespace implreg
