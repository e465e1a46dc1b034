#pragma once

// Eigendecomposition of the normalized Laplacian and spectral calculus on the
// subspace orthogonal to D^{1/2} 1. Every operator built here annihilates
// the trivial direction; identities and traces are those of the subspace.

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "implreg/error.hpp"
#include "implreg/format.hpp"
#include "implreg/graph.hpp"

namespace implreg {

inline constexpr double kTrivialEigenvalueTol = 1e-8;
inline constexpr double kSignTol = 1e-12;

class SpectralBasis {
 public:
  SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                Eigen::Index trivial_index)
      : eigenvalues_(std::move(eigenvalues)),
        eigenvectors_(std::move(eigenvectors)),
        trivial_index_(trivial_index) {
    const Eigen::Index n = eigenvalues_.size();
    nontrivial_values_.resize(n - 1);
    nontrivial_vectors_.resize(n, n - 1);
    for (Eigen::Index i = 0, k = 0; i < n; ++i) {
      if (i == trivial_index_) continue;
      nontrivial_values_(k) = eigenvalues_(i);
      nontrivial_vectors_.col(k) = eigenvectors_.col(i);
      ++k;
    }
  }

  Eigen::Index n() const noexcept { return eigenvalues_.size(); }
  /// Dimension of the nontrivial subspace, n - 1.
  Eigen::Index dim() const noexcept { return nontrivial_values_.size(); }

  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  Eigen::Index trivial_index() const noexcept { return trivial_index_; }

  /// Eigenvalues with the trivial one removed, ascending.
  const Eigen::VectorXd& nontrivial_eigenvalues() const noexcept { return nontrivial_values_; }
  /// n x (n-1) matrix whose columns match nontrivial_eigenvalues().
  const Eigen::MatrixXd& nontrivial_vectors() const noexcept { return nontrivial_vectors_; }
  Eigen::VectorXd trivial_vector() const { return eigenvectors_.col(trivial_index_); }

  double smallest_nontrivial() const { return nontrivial_values_.minCoeff(); }
  double largest() const { return nontrivial_values_.maxCoeff(); }

  /// I - v0 v0^T, the orthogonal projector onto the nontrivial subspace.
  Eigen::MatrixXd projector() const {
    const Eigen::VectorXd v0 = trivial_vector();
    return Eigen::MatrixXd::Identity(n(), n()) - v0 * v0.transpose();
  }

  /// V_sub diag(values) V_sub^T for a vector of n-1 subspace eigenvalues.
  Eigen::MatrixXd compose(const Eigen::VectorXd& values) const {
    return nontrivial_vectors_ * values.asDiagonal() * nontrivial_vectors_.transpose();
  }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::Index trivial_index_;
  Eigen::VectorXd nontrivial_values_;
  Eigen::MatrixXd nontrivial_vectors_;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// Dense symmetric eigensolve of L. Eigenvalues ascending; each eigenvector's
/// first entry with magnitude above 1e-12 is made positive.
inline SpectralBasis decompose(const Eigen::MatrixXd& L, const Eigen::VectorXd& degrees) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
  if (solver.info() != Eigen::Success) throw std::logic_error("eigensolver failed");
  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();

  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, j)) > kSignTol) {
        if (vectors(i, j) < 0) vectors.col(j) *= -1.0;
        break;
      }
    }
  }

  Eigen::Index near_zero = 0;
  Eigen::Index trivial = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) <= kTrivialEigenvalueTol) {
      ++near_zero;
      if (trivial < 0) trivial = i;
    }
  }
  if (near_zero != 1) {
    fail(ErrorCode::DegenerateTrivialSpace,
         std::to_string(near_zero) + " eigenvalues within 1e-8 of zero (expected exactly one)");
  }

  const Eigen::VectorXd root = degrees.array().sqrt().matrix().normalized();
  const double cosine = std::abs(root.dot(vectors.col(trivial)));
  if (cosine < 1.0 - 1e-10) {
    throw std::logic_error("trivial eigenvector is not aligned with D^{1/2} 1");
  }
  return SpectralBasis(std::move(values), std::move(vectors), trivial);
}

/// Sum over nontrivial eigenpairs of f(l_i) v_i v_i^T.
template <class F>
Eigen::MatrixXd apply_spectral_function(const SpectralBasis& basis, F&& f) {
  const Eigen::VectorXd& l = basis.nontrivial_eigenvalues();
  Eigen::VectorXd fl(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    fl(i) = f(l(i));
    if (!std::isfinite(fl(i))) {
      fail(ErrorCode::SingularFunctionValue,
           "spectral function is not finite at eigenvalue " + format_double(l(i)));
    }
  }
  return basis.compose(fl);
}

/// Tr(P m P) with P the projector off the trivial direction.
inline double subspace_trace(const Eigen::MatrixXd& m, const SpectralBasis& basis) {
  const Eigen::VectorXd v0 = basis.trivial_vector();
  return m.trace() - v0.dot(m * v0);
}

/// P m P.
inline Eigen::MatrixXd project_to_subspace(const Eigen::MatrixXd& m, const SpectralBasis& basis) {
  const Eigen::MatrixXd p = basis.projector();
  return p * m * p;
}

/// Unit-trace PSD operator on the nontrivial subspace, stored as weights over
/// the nontrivial eigenvectors of L.
class DensityMatrix {
 public:
  DensityMatrix(BasisPtr basis, Eigen::VectorXd weights)
      : basis_(std::move(basis)), weights_(std::move(weights)) {}

  const SpectralBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  Eigen::MatrixXd dense() const { return basis_->compose(weights_); }

  /// X^{1/2} = sum sqrt(mu_i) v_i v_i^T.
  Eigen::MatrixXd sqrt() const { return basis_->compose(weights_.array().sqrt().matrix()); }

  /// L . X computed in eigen-coordinates.
  double objective() const { return basis_->nontrivial_eigenvalues().dot(weights_); }

 private:
  BasisPtr basis_;
  Eigen::VectorXd weights_;
};

/// Weights are clipped at zero (after rejecting anything below -1e-12) and
/// renormalized to sum exactly one.
inline DensityMatrix density_from_weights(BasisPtr basis, Eigen::VectorXd weights) {
  if (weights.size() != basis->dim()) {
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(basis->dim()) +
                                         " weights, got " + std::to_string(weights.size()));
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i))) fail(ErrorCode::InvalidArgument, "non-finite weight");
    if (weights(i) < -1e-12) {
      fail(ErrorCode::NegativeWeight, "weight " + std::to_string(i) + " is " +
                                          format_double(weights(i)));
    }
    if (weights(i) < 0.0) weights(i) = 0.0;
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > 1e-8) {
    fail(ErrorCode::InvalidArgument, "weights sum to " + format_double(total) + ", expected 1");
  }
  weights /= total;
  return DensityMatrix(std::move(basis), std::move(weights));
}

inline Eigen::MatrixXd sqrt(const DensityMatrix& x) { return x.sqrt(); }

/// Graph together with its walk matrices and Laplacian spectrum.
struct GraphSpectrum {
  Graph graph;
  WalkMatrices walk;
  BasisPtr basis;
};

inline GraphSpectrum analyze(Graph g) {
  WalkMatrices walk = build_walk_matrices(g);
  auto basis = std::make_shared<const SpectralBasis>(decompose(walk.L, g.degrees()));
  return GraphSpectrum{std::move(g), std::move(walk), std::move(basis)};
}

}  // namespace implreg
