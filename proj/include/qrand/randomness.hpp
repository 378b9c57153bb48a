#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrand/entropy.hpp"
#include "qrand/optimize.hpp"
#include "qrand/state.hpp"

// The two randomness measures of a projective measurement on rho:
//
//   r_quantum    S(dephase(rho)) - S(rho), the relative entropy of coherence;
//                the residual uncertainty of a party holding a purification.
//   r_classical  convex-roof extension of the pure-state measure: the minimum
//                average measurement entropy over all pure-state ensembles
//                decomposing rho. Computed numerically; the returned value is
//                an upper bound on the true minimum.

namespace qrand {

enum class Method { closed_form, convex_roof_optimizer, qubit_oracle };

struct RandomnessResult {
  double value = 0.0;  // bits
  Method method = Method::closed_form;
  OptimizerInfo info;
  std::optional<Ensemble> ensemble;  // minimizing decomposition, when searched
};

/// Shannon entropy of the overlap distribution |<i|psi>|^2; for pure states
/// this is the total randomness of the measurement.
inline double pure_state_randomness(const PureState& psi, const Basis& basis,
                                    const Tolerances& tol = default_tolerances()) {
  if (psi.dim() != basis.dim()) throw DimMismatch("basis dimension does not match state");
  const Vector overlaps = basis.matrix().adjoint() * psi.amplitudes();
  double h = 0.0;
  for (Eigen::Index i = 0; i < overlaps.size(); ++i)
    h += detail::plogp(std::norm(overlaps(i)), tol.zero_eigenvalue);
  return h;
}

/// Quantum randomness: S(rho_diag) - S(rho), equal to the relative entropy
/// from rho to its dephased image.
inline RandomnessResult r_quantum(const DensityMatrix& rho, const Basis& basis,
                                  const Tolerances& tol = default_tolerances()) {
  RandomnessResult result;
  result.value = von_neumann(dephase(rho, basis), tol) - von_neumann(rho, tol);
  result.method = Method::closed_form;
  return result;
}

/// Qubit closed form of the measurement-based randomness for the sigma_z
/// basis: H((1 + sqrt(1 - nx^2 - ny^2))/2).
inline double r_classical_qubit(const BlochVector& n, const Tolerances& tol = default_tolerances()) {
  if (n.squared_norm() > 1.0 + tol.norm)
    throw NormExceedsOne(detail::format_violation("Bloch vector lies outside the unit ball",
                                                  n.squared_norm() - 1.0, tol.norm));
  const double transverse = std::max(0.0, 1.0 - n.nx * n.nx - n.ny * n.ny);
  return binary_entropy(0.5 * (1.0 + std::sqrt(transverse)), tol);
}

/// Same closed form for an arbitrary qubit measurement basis: rotating the
/// state into the frame of the basis reduces it to the sigma_z case.
inline double r_classical_qubit(const DensityMatrix& rho, const Basis& basis,
                                const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != 2 || basis.dim() != 2) throw DimMismatch("qubit closed form needs dimension 2");
  Matrix rotated = basis.matrix().adjoint() * rho.matrix() * basis.matrix();
  rotated = Matrix(0.5 * (rotated + rotated.adjoint()));
  return r_classical_qubit(state_to_bloch(DensityMatrix(std::move(rotated), detail::unchecked)), tol);
}

namespace detail {

/// Average measurement entropy of the ensemble selected by an m x rank
/// isometry (the first rank columns of an m x m unitary): member k is
/// phi_k = sum_i U(k,i) sqrt(lambda_i) |a_i>, carrying weight |phi_k|^2.
/// Every size-m decomposition of rho arises this way from a measurement on
/// the purifying environment.
class ConvexRoofObjective {
 public:
  ConvexRoofObjective(const Spectrum& spectrum, Eigen::Index rank, const Basis& basis, Eigen::Index m)
      : m_(m), rank_(rank) {
    // overlaps of the scaled eigenvectors with the measurement basis
    scaled_ = basis.matrix().adjoint() * spectrum.eigenvectors.leftCols(rank);
    for (Eigen::Index i = 0; i < rank; ++i)
      scaled_.col(i) *= std::sqrt(std::max(0.0, spectrum.eigenvalues(i)));
  }

  double operator()(const Eigen::VectorXd& params) const {
    const Matrix w = unitary_from_parameters(params, m_);
    const Matrix overlaps = scaled_ * w.leftCols(rank_).transpose();  // d x m, column k = <b|phi_k>
    double value = 0.0;
    for (Eigen::Index k = 0; k < m_; ++k) {
      double weight = 0.0;
      double member_entropy = 0.0;
      for (Eigen::Index j = 0; j < overlaps.rows(); ++j) {
        const double o = std::norm(overlaps(j, k));
        weight += o;
        member_entropy += plogp(o, kObjectiveCutoff);
      }
      value += member_entropy - plogp(weight, kObjectiveCutoff);
    }
    return value;
  }

  // smoother than the reporting cutoff; the difference is far below every
  // downstream tolerance
  static constexpr double kObjectiveCutoff = 1e-18;

 private:
  Eigen::Index m_;
  Eigen::Index rank_;
  Matrix scaled_;  // d x rank
};

inline Ensemble ensemble_from_parameters(const Eigen::VectorXd& params, const Spectrum& spectrum,
                                         Eigen::Index rank, Eigen::Index m, double zero_cutoff) {
  Matrix members = spectrum.eigenvectors.leftCols(rank);  // d x rank
  for (Eigen::Index i = 0; i < rank; ++i)
    members.col(i) *= std::sqrt(std::max(0.0, spectrum.eigenvalues(i)));
  const Matrix w = unitary_from_parameters(params, m);
  const Matrix phi = members * w.leftCols(rank).transpose();  // d x m

  std::vector<Ensemble::Member> kept;
  double total = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double weight = phi.col(k).squaredNorm();
    if (weight < zero_cutoff) continue;
    kept.emplace_back(weight, PureState(phi.col(k) / std::sqrt(weight), unchecked));
    total += weight;
  }
  for (auto& [weight, state] : kept) weight /= total;
  return Ensemble(std::move(kept));
}

}  // namespace detail

/// Convex-roof randomness by seeded multistart search over environment
/// measurements. Returns the best ensemble found and its average pure-state
/// randomness — an upper bound on the true convex roof. Incoherent and pure
/// inputs are resolved in closed form. For qubits the result is checked
/// against the closed-form oracle; a mismatch beyond 1e-4 clears the
/// convergence flag.
inline RandomnessResult r_classical(const DensityMatrix& rho, const Basis& basis,
                                    const OptimizerConfig& cfg = {},
                                    const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != basis.dim()) throw DimMismatch("basis dimension does not match state");

  const Spectrum spectrum = spectral_decomposition(rho, tol);
  Eigen::Index rank = 0;
  while (rank < spectrum.eigenvalues.size() && spectrum.eigenvalues(rank) >= tol.zero_eigenvalue) ++rank;
  rank = std::max<Eigen::Index>(rank, 1);

  RandomnessResult result;

  if (rank == 1) {  // pure state: every decomposition is the state itself
    PureState psi(spectrum.eigenvectors.col(0), detail::unchecked);
    result.value = pure_state_randomness(psi, basis, tol);
    result.method = Method::closed_form;
    result.ensemble = Ensemble({{1.0, std::move(psi)}});
    return result;
  }

  const Matrix in_frame = basis.matrix().adjoint() * rho.matrix() * basis.matrix();
  const double off_diagonal =
      (in_frame - Matrix(in_frame.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  if (off_diagonal <= tol.zero_eigenvalue) {  // incoherent: the diagonal ensemble attains zero
    std::vector<Ensemble::Member> members;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
      const double p = in_frame(i, i).real();
      if (p >= tol.zero_eigenvalue)
        members.emplace_back(p, PureState(basis.vector(i), detail::unchecked));
    }
    result.value = 0.0;
    result.method = Method::closed_form;
    result.ensemble = Ensemble(std::move(members));
    return result;
  }

  const Eigen::Index m = cfg.ensemble_size > 0 ? cfg.ensemble_size : rank * rank;
  if (m < rank)
    throw OutOfRange("ensemble size " + std::to_string(m) + " is below the state rank " +
                     std::to_string(rank));

  const detail::ConvexRoofObjective objective(spectrum, rank, basis, m);
  const detail::SearchResult search = detail::restarted_minimize(
      [&objective](const Eigen::VectorXd& x) { return objective(x); },
      detail::unitary_parameter_count(m), cfg);

  result.value = std::max(0.0, search.value);
  result.method = Method::convex_roof_optimizer;
  result.info = search.info;
  result.ensemble = detail::ensemble_from_parameters(search.x, spectrum, rank, m, tol.zero_eigenvalue);

  if (rho.dim() == 2 && std::abs(result.value - r_classical_qubit(rho, basis, tol)) > 1e-4)
    result.info.converged = false;
  return result;
}

/// r_classical - r_quantum; nonnegative up to optimizer noise.
inline double randomness_gap(const DensityMatrix& rho, const Basis& basis,
                             const OptimizerConfig& cfg = {},
                             const Tolerances& tol = default_tolerances()) {
  return r_classical(rho, basis, cfg, tol).value - r_quantum(rho, basis, tol).value;
}

}  // namespace qrand
