#pragma once

// Shared fixtures and test-only oracles. Nothing here calls the library's
// eigensolver or matrix functions, so values it produces are independent
// checks on the implementation.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "implreg/generators.hpp"
#include "implreg/graph.hpp"
#include "implreg/spectral.hpp"

namespace implreg::testing {

inline constexpr std::uint64_t kRandomGraphSeed = 7;

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// K2, P3, K3, C4, C5, S4 (star with four leaves), seeded G(8, 0.5).
inline std::vector<NamedGraph> sweep_graphs() {
  using namespace implreg::generators;
  return {{"K2", complete(2)}, {"P3", path(3)},  {"K3", complete(3)},
          {"C4", cycle(4)},    {"C5", cycle(5)}, {"S4", star(4)},
          {"G(8,0.5)", erdos_renyi(8, 0.5, kRandomGraphSeed)}};
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Returns
/// ascending eigenvalues and matching orthonormal eigenvectors (columns).
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {values, vectors};
}

/// Truncated Taylor series sum_{k<=terms} (-t)^k L^k / k!.
inline Eigen::MatrixXd exp_series(const Eigen::MatrixXd& L, double t, int terms = 40) {
  const Eigen::Index n = L.rows();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= terms; ++k) {
    term = term * L * (-t / k);
    sum += term;
  }
  return sum;
}

/// I - v v^T for v = D^{1/2} 1 normalized, built from degrees alone.
inline Eigen::MatrixXd degree_projector(const Eigen::VectorXd& degrees) {
  const Eigen::VectorXd v = degrees.array().sqrt().matrix().normalized();
  return Eigen::MatrixXd::Identity(v.size(), v.size()) - v * v.transpose();
}

/// Softmax of -eta * l, computed with a max shift.
inline Eigen::VectorXd softmax_neg(const Eigen::VectorXd& l, double eta) {
  const double lo = l.minCoeff();
  Eigen::VectorXd e = (-eta * (l.array() - lo)).exp().matrix();
  return e / e.sum();
}

}  // namespace implreg::testing
