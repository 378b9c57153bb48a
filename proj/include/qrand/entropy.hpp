#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qrand/state.hpp"

// Entropy functionals. All logarithms are base 2, so every value is in bits;
// probabilities and eigenvalues below the zero cutoff contribute nothing
// (the continuous extension 0 log 0 = 0).

namespace qrand {

namespace detail {

inline double plogp(double p, double cutoff) {
  return (p < cutoff) ? 0.0 : -p * std::log2(p);
}

/// Shannon entropy of a raw nonnegative weight vector (assumed normalized).
template <typename Range>
double entropy_of_weights(const Range& weights, double cutoff) {
  double h = 0.0;
  for (double p : weights) h += plogp(p, cutoff);
  return h;
}

/// Entropy of the spectrum of a Hermitian matrix, without the DensityMatrix
/// wrapper (hot path for the optimizers).
inline double von_neumann_raw(const Matrix& hermitian, double cutoff = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    h += plogp(solver.eigenvalues()(i), cutoff);
  return h;
}

}  // namespace detail

inline double shannon(const ProbDist& p, const Tolerances& tol = default_tolerances()) {
  return detail::entropy_of_weights(p.weights(), tol.zero_eigenvalue);
}

inline double binary_entropy(double x, const Tolerances& tol = default_tolerances()) {
  if (x < -tol.zero_eigenvalue || x > 1.0 + tol.zero_eigenvalue)
    throw OutOfRange("binary entropy argument " + std::to_string(x) + " outside [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  return detail::plogp(x, tol.zero_eigenvalue) + detail::plogp(1.0 - x, tol.zero_eigenvalue);
}

/// Von Neumann entropy S(rho) = H(spectrum).
inline double von_neumann(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) {
  const Spectrum s = spectral_decomposition(rho, tol);
  return detail::entropy_of_weights(s.eigenvalues, tol.zero_eigenvalue);
}

/// Quantum conditional entropy of the first subsystem given the second:
/// S(A|B) = S(AB) - S(B). Negative for entangled inputs.
inline double quantum_conditional(const DensityMatrix& rho_ab, Eigen::Index dim_a, Eigen::Index dim_b,
                                  const Tolerances& tol = default_tolerances()) {
  const DensityMatrix rho_b = partial_trace(rho_ab, dim_a, dim_b, Subsystem::B);
  return von_neumann(rho_ab, tol) - von_neumann(rho_b, tol);
}

/// Classical conditional entropy H(X|Y) = H(X,Y) - H(Y) of a joint
/// distribution with rows indexing X and columns indexing Y.
inline double classical_conditional(const Eigen::MatrixXd& joint,
                                    const Tolerances& tol = default_tolerances()) {
  double sum = 0.0;
  double joint_entropy = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i)
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p < -tol.zero_eigenvalue)
        throw NotADistribution("joint distribution has a negative entry " + std::to_string(p));
      sum += p;
      joint_entropy += detail::plogp(p, tol.zero_eigenvalue);
    }
  if (std::abs(sum - 1.0) > tol.norm)
    throw NotADistribution(
        detail::format_violation("joint distribution does not sum to one", std::abs(sum - 1.0), tol.norm));
  double marginal_entropy = 0.0;
  for (Eigen::Index j = 0; j < joint.cols(); ++j)
    marginal_entropy += detail::plogp(std::max(0.0, joint.col(j).sum()), tol.zero_eigenvalue);
  return std::max(0.0, joint_entropy - marginal_entropy);
}

/// Quantum relative entropy S(rho || sigma) = Tr[rho (log rho - log sigma)].
/// Returns +infinity when rho carries weight outside the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != sigma.dim()) throw DimMismatch("relative entropy needs states of equal dimension");
  const Spectrum ss = spectral_decomposition(sigma, tol);

  double weight_outside = 0.0;
  double cross_term = 0.0;  // -Tr[rho log2 sigma] over the support of sigma
  for (Eigen::Index k = 0; k < sigma.dim(); ++k) {
    const Vector v = ss.eigenvectors.col(k);
    const double overlap = std::max(0.0, (v.adjoint() * rho.matrix() * v)(0, 0).real());
    if (ss.eigenvalues(k) < tol.zero_eigenvalue)
      weight_outside += overlap;
    else
      cross_term -= overlap * std::log2(ss.eigenvalues(k));
  }
  if (weight_outside > tol.support) return std::numeric_limits<double>::infinity();
  return std::max(0.0, cross_term - von_neumann(rho, tol));
}

}  // namespace qrand
