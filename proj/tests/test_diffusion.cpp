#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "implreg/diffusion.hpp"
#include "implreg/generators.hpp"
#include "implreg/random.hpp"
#include "support.hpp"

using namespace implreg;
using implreg::testing::degree_projector;
using implreg::testing::exp_series;
using implreg::testing::jacobi_eigen;
using implreg::testing::max_abs;
using implreg::testing::sweep_graphs;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an implreg::Error";
  return ErrorCode::InvalidArgument;
}

Eigen::VectorXd random_preference(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = rng.uniform();
  return s / s.sum();
}

Eigen::VectorXd unit(Eigen::Index n, Eigen::Index i) { return Eigen::VectorXd::Unit(n, i); }

}  // namespace

TEST(HeatKernel, TimeZeroIsProjector) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    EXPECT_LE(max_abs(heat_kernel(*spec.basis, 0.0) - degree_projector(g.degrees())), 1e-12) << name;
  }
}

TEST(HeatKernel, PathAtTimeOne) {
  const auto spec = analyze(generators::path(3));
  const auto [values, vectors] = jacobi_eigen(heat_kernel(*spec.basis, 1.0));
  EXPECT_NEAR(values(1), 0.1353352832366127, 1e-12);
  EXPECT_NEAR(values(2), 0.36787944117144233, 1e-12);
}

TEST(HeatKernel, MatchesTaylorSeries) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    const Eigen::MatrixXd p = degree_projector(g.degrees());
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const Eigen::MatrixXd series = p * exp_series(spec.walk.L, t) * p;
      EXPECT_LE(max_abs(heat_kernel(*spec.basis, t) - series), 1e-10) << name << " t=" << t;
    }
  }
}

TEST(HeatKernel, Semigroup) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    for (double s : {0.1, 0.5, 1.0})
      for (double t : {0.1, 0.5, 1.0}) {
        const Eigen::MatrixXd lhs = heat_kernel(*spec.basis, s) * heat_kernel(*spec.basis, t);
        EXPECT_LE(max_abs(lhs - heat_kernel(*spec.basis, s + t)), 1e-9) << name;
      }
  }
}

TEST(HeatKernel, HeatEquationResidual) {
  const double h = 1e-4;
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    for (double t : {0.5, 1.0, 3.0}) {
      const Eigen::MatrixXd fd =
          (heat_kernel(*spec.basis, t + h) - heat_kernel(*spec.basis, t - h)) / (2 * h);
      EXPECT_LE(max_abs(fd + spec.walk.L * heat_kernel(*spec.basis, t)), 1e-6) << name;
    }
  }
}

TEST(HeatKernel, NegativeTime) {
  const auto spec = analyze(generators::path(3));
  EXPECT_EQ(code_of([&] { heat_kernel(*spec.basis, -1e-3); }), ErrorCode::NegativeTime);
}

TEST(PageRankOperator, GammaOneIsIdentity) {
  EXPECT_LE(max_abs(pagerank_operator(generators::cycle(5), 1.0) - Eigen::MatrixXd::Identity(5, 5)),
            0.0);
}

TEST(PageRankOperator, SingleEdgeHalf) {
  const Eigen::MatrixXd r = pagerank_operator(generators::complete(2), 0.5);
  // gamma (I - (1-gamma) M)^{-1} with M = [[0,1],[1,0]]: 0.5 * [[1,.5],[.5,1]] / 0.75.
  EXPECT_NEAR(r(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 1.0 / 3.0, 1e-15);
}

TEST(PageRankOperator, ResolventIdentityAndColumnSums) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto walk = build_walk_matrices(g);
    const auto n = static_cast<Eigen::Index>(g.n());
    for (double gamma : {0.05, 0.1, 0.5, 0.9, 1.0}) {
      const Eigen::MatrixXd r = pagerank_operator(walk, gamma);
      const Eigen::MatrixXd rhs = gamma * Eigen::MatrixXd::Identity(n, n) + (1 - gamma) * walk.M * r;
      EXPECT_LE(max_abs(r - rhs), 1e-9) << name << gamma;
      EXPECT_LE((r.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12) << name << gamma;
    }
  }
}

TEST(PageRankOperator, GeometricSeriesTailBound) {
  Rng rng(3);
  for (const auto& [name, g] : sweep_graphs()) {
    const auto walk = build_walk_matrices(g);
    const auto n = static_cast<Eigen::Index>(g.n());
    for (double gamma : {0.1, 0.3, 0.7}) {
      const Eigen::VectorXd s = random_preference(rng, n);
      const Eigen::VectorXd pi = pagerank_operator(walk, gamma) * s;
      for (int T : {0, 5, 20, 80}) {
        Eigen::VectorXd term = s;
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
        for (int t = 0; t <= T; ++t) {
          sum += gamma * term;
          term = (1 - gamma) * (walk.M * term);
        }
        const double bound = std::pow(1 - gamma, T + 1);
        EXPECT_LE((pi - sum).lpNorm<1>(), bound * (1 + 1e-12) + 1e-15) << name << " T=" << T;
      }
    }
  }
}

TEST(PageRankOperator, GammaOutOfRange) {
  const Graph g = generators::path(3);
  EXPECT_EQ(code_of([&] { pagerank_operator(g, 0.0); }), ErrorCode::GammaOutOfRange);
  EXPECT_EQ(code_of([&] { pagerank_operator(g, 1.5); }), ErrorCode::GammaOutOfRange);
  EXPECT_EQ(code_of([&] { pagerank_operator(g, -0.2); }), ErrorCode::GammaOutOfRange);
}

TEST(PageRankVector, Examples) {
  const Graph k2 = generators::complete(2);
  const Eigen::VectorXd pi = pagerank_vector(k2, 0.5, unit(2, 0));
  EXPECT_NEAR(pi(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(pi(1), 1.0 / 3.0, 1e-15);
  for (const auto& [name, g] : sweep_graphs()) {
    const Eigen::VectorXd stationary = g.degrees() / g.degrees().sum();
    EXPECT_LE((pagerank_vector(g, 0.3, stationary) - stationary).cwiseAbs().maxCoeff(), 1e-12) << name;
    const Eigen::VectorXd e0 = unit(static_cast<Eigen::Index>(g.n()), 0);
    EXPECT_LE((pagerank_vector(g, 1.0, e0) - e0).cwiseAbs().maxCoeff(), 0.0) << name;
  }
}

TEST(PageRankVector, FixedPointAndMass) {
  Rng rng(5);
  for (const auto& [name, g] : sweep_graphs()) {
    const auto walk = build_walk_matrices(g);
    for (double gamma : {0.1, 0.5, 0.9}) {
      const Eigen::VectorXd s = random_preference(rng, static_cast<Eigen::Index>(g.n()));
      const Eigen::VectorXd pi = pagerank_vector(walk, gamma, s);
      EXPECT_LE((pi - (gamma * s + (1 - gamma) * walk.M * pi)).cwiseAbs().maxCoeff(), 1e-10) << name;
      EXPECT_NEAR(pi.sum(), 1.0, 1e-12) << name;
    }
  }
}

TEST(PageRankVector, BadPreference) {
  const Graph g = generators::path(3);
  EXPECT_EQ(code_of([&] { pagerank_vector(g, 0.5, Eigen::Vector3d(0.5, 0.5, 0.5)); }),
            ErrorCode::BadPreferenceVector);
  EXPECT_EQ(code_of([&] { pagerank_vector(g, 0.5, Eigen::Vector3d(1.5, -0.5, 0.0)); }),
            ErrorCode::BadPreferenceVector);
  EXPECT_EQ(code_of([&] { pagerank_vector(g, 0.5, Eigen::Vector2d(0.5, 0.5)); }),
            ErrorCode::BadPreferenceVector);
  EXPECT_EQ(code_of([&] { lazy_pagerank_vector(g, 0.5, Eigen::Vector3d(1, 0, 0.1)); }),
            ErrorCode::BadPreferenceVector);
}

TEST(LazyPageRankVector, RelatedToPlainPageRank) {
  Rng rng(9);
  for (const auto& [name, g] : sweep_graphs()) {
    const auto walk = build_walk_matrices(g);
    const auto n = static_cast<Eigen::Index>(g.n());
    for (double gamma : {0.05, 0.2, 0.5, 0.8, 0.99}) {
      const Eigen::VectorXd s = random_preference(rng, n);
      const Eigen::VectorXd lazy = lazy_pagerank_vector(walk, gamma, s);
      const Eigen::VectorXd plain = pagerank_vector(walk, 2 * gamma / (1 + gamma), s);
      EXPECT_LE((lazy - plain).cwiseAbs().maxCoeff(), 1e-10) << name << gamma;
      const Eigen::MatrixXd w = 0.5 * (Eigen::MatrixXd::Identity(n, n) + walk.M);
      EXPECT_LE((lazy - (gamma * s + (1 - gamma) * w * lazy)).cwiseAbs().maxCoeff(), 1e-10) << name;
    }
    const Eigen::VectorXd stationary = g.degrees() / g.degrees().sum();
    EXPECT_LE((lazy_pagerank_vector(walk, 0.4, stationary) - stationary).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::VectorXd e0 = unit(n, 0);
    EXPECT_LE((lazy_pagerank_vector(walk, 1.0, e0) - e0).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(LazyWalkPower, ZeroStepsAndFullLaziness) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    const auto n = static_cast<Eigen::Index>(g.n());
    EXPECT_LE(max_abs(lazy_walk_power(spec, 0.3, 0.0) - Eigen::MatrixXd::Identity(n, n)), 1e-12);
    EXPECT_LE(max_abs(lazy_walk_power(spec, 1.0, 1.0) - Eigen::MatrixXd::Identity(n, n)), 1e-12);
  }
}

TEST(LazyWalkPower, PathSquare) {
  const Graph g = generators::path(3);
  const Eigen::MatrixXd w = lazy_walk(g, 0.5);
  EXPECT_LE(max_abs(lazy_walk_power(g, 0.5, 2.0) - w * w), 1e-12);
}

TEST(LazyWalkPower, IntegerPowersMatchRepeatedMultiplication) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    for (double alpha : {0.0, 0.3, 0.5, 0.8}) {
      const Eigen::MatrixXd w = lazy_walk(g, alpha);
      Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(g.n(), g.n());
      for (int k = 1; k <= 6; ++k) {
        acc = acc * w;
        EXPECT_LE(max_abs(lazy_walk_power(spec, alpha, k) - acc), 1e-10) << name << alpha << k;
      }
    }
  }
}

TEST(LazyWalkPower, FractionalPowersComposeAboveThreshold) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    const double alpha = std::max(0.5, lazy_walk_psd_threshold(*spec.basis)) + 0.05;
    const Eigen::MatrixXd half = lazy_walk_power(spec, alpha, 0.5);
    EXPECT_LE(max_abs(half * half - lazy_walk(g, alpha)), 1e-10) << name;
    const Eigen::MatrixXd a = lazy_walk_power(spec, alpha, 1.5);
    EXPECT_LE(max_abs(a * half - lazy_walk_power(spec, alpha, 2.0)), 1e-10) << name;
  }
}

TEST(LazyWalkPower, FractionalPowerNeedsPsdWalk) {
  // K2 has l = 2, so W' has eigenvalue 2 alpha - 1 < 0 for alpha < 1/2.
  const auto spec = analyze(generators::complete(2));
  EXPECT_DOUBLE_EQ(lazy_walk_psd_threshold(*spec.basis), 0.5);
  EXPECT_EQ(code_of([&] { lazy_walk_power(spec, 0.3, 1.5); }),
            ErrorCode::NegativeEigenvalueFractionalPower);
  EXPECT_NO_THROW(lazy_walk_power(spec, 0.3, 3.0));
  EXPECT_NO_THROW(lazy_walk_power(spec, 0.5, 1.5));
  EXPECT_EQ(code_of([&] { lazy_walk_power(spec, 1.2, 1.0); }), ErrorCode::AlphaOutOfRange);
}

TEST(PowerDemo, EigenvectorIsScaledEachStep) {
  for (const auto& [name, g] : sweep_graphs()) {
    const auto spec = analyze(g);
    const double alpha = 0.4;
    for (Eigen::Index i = 0; i < spec.basis->dim(); ++i) {
      const double l = spec.basis->nontrivial_eigenvalues()(i);
      const Eigen::VectorXd v0 = spec.basis->nontrivial_vectors().col(i);
      const auto traj = power_demo(spec, alpha, 5, v0);
      ASSERT_EQ(traj.size(), 6u);
      for (const auto& s : traj) {
        const Eigen::VectorXd expected = std::pow(1 - (1 - alpha) * l, s.step) * v0;
        EXPECT_LE((s.vector - expected).cwiseAbs().maxCoeff(), 1e-12) << name;
        if (expected.norm() > 1e-150) {
          EXPECT_NEAR(s.rayleigh, l, 1e-10) << name;
        }
      }
    }
  }
}

TEST(PowerDemo, ZeroStepsIsStartVector) {
  const auto spec = analyze(generators::path(3));
  const Eigen::VectorXd v0(Eigen::Vector3d(1, 2, 3));
  const auto traj = power_demo(spec, 0.5, 0, v0);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].vector, v0);
}

TEST(PowerDemo, PathConvergesToSmallestNontrivialEigenvalue) {
  const auto spec = analyze(generators::path(3));
  Rng rng(42);
  Eigen::VectorXd v0(3);
  for (Eigen::Index i = 0; i < 3; ++i) v0(i) = rng.gaussian();
  const auto traj = power_demo(spec, 0.5, 50, v0);
  const auto [values, vectors] = jacobi_eigen(spec.walk.L);
  EXPECT_NEAR(traj.back().rayleigh, values(1), 1e-6);
  EXPECT_NEAR(traj.back().rayleigh, 1.0, 1e-6);
}

TEST(PowerDemo, Errors) {
  const auto spec = analyze(generators::path(3));
  EXPECT_EQ(code_of([&] { power_demo(spec, 0.5, 3, Eigen::VectorXd::Zero(3)); }),
            ErrorCode::ZeroStartVector);
  EXPECT_EQ(code_of([&] { power_demo(spec, 0.5, -1, Eigen::VectorXd::Ones(3)); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { power_demo(spec, 2.0, 1, Eigen::VectorXd::Ones(3)); }),
            ErrorCode::AlphaOutOfRange);
}

TEST(PowerDemo, TrivialStartHasNoRayleighQuotient) {
  const auto spec = analyze(generators::path(3));
  const auto traj = power_demo(spec, 0.5, 3, spec.graph.sqrt_degrees());
  for (const auto& s : traj) EXPECT_TRUE(std::isnan(s.rayleigh));
  EXPECT_LE((traj.back().vector - spec.graph.sqrt_degrees()).cwiseAbs().maxCoeff(), 1e-12);
}
