#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrand/entropy.hpp"
#include "qrand/optimize.hpp"
#include "qrand/randomness.hpp"
#include "qrand/state.hpp"

// Quantum discord of a bipartite state with the measurement on the second
// subsystem: D_B = min over measurements of S(A|{outcomes}) - S(A|B), the
// part of the correlations no local measurement on B can extract. For the
// classical-quantum states produced by measuring one half of a purification,
// this equals the gap between the two randomness measures.

namespace qrand {

/// Mixture of orthogonal pointer states on a label register, each paired
/// with a conditional carrier state: sum_i w_i |b_i><b_i| (x) rho_i.
struct CQState {
  ProbDist weights;
  Basis pointer_basis;
  std::vector<DensityMatrix> conditionals;
};

inline DensityMatrix assemble_cq(const CQState& cq) {
  const Eigen::Index da = cq.pointer_basis.dim();
  if (std::cmp_not_equal(cq.weights.size(), da) || std::cmp_not_equal(cq.conditionals.size(), da))
    throw DimMismatch("classical-quantum state needs one weight and one conditional per pointer");
  const Eigen::Index db = cq.conditionals.front().dim();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    if (cq.conditionals[static_cast<std::size_t>(i)].dim() != db)
      throw DimMismatch("conditional states have mixed dimensions");
    const double w = cq.weights[static_cast<std::size_t>(i)];
    if (w <= 0.0) continue;
    const Vector b = cq.pointer_basis.vector(i);
    out += w * kron(b * b.adjoint(), cq.conditionals[static_cast<std::size_t>(i)].matrix());
  }
  out = Matrix(0.5 * (out + out.adjoint()));
  return DensityMatrix(std::move(out), detail::unchecked);
}

/// Projective measurement of the first subsystem of a bipartite pure state:
/// outcome i carries weight |(<b_i| (x) I)|psi>|^2 and leaves the second
/// subsystem in the corresponding (pure) conditional state. Outcomes below
/// the zero cutoff keep a placeholder conditional with weight zero.
inline CQState measure_first_subsystem(const PureState& joint, Eigen::Index dim_a, Eigen::Index dim_b,
                                       const Basis& basis, const Tolerances& tol = default_tolerances()) {
  if (dim_a * dim_b != joint.dim())
    throw DimMismatch("subsystem dimensions do not factor the joint state");
  if (basis.dim() != dim_a) throw DimMismatch("measurement basis does not match the first subsystem");

  std::vector<double> weights(static_cast<std::size_t>(dim_a));
  std::vector<DensityMatrix> conditionals;
  conditionals.reserve(static_cast<std::size_t>(dim_a));
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    Vector e = Vector::Zero(dim_b);
    for (Eigen::Index a = 0; a < dim_a; ++a)
      e += std::conj(basis.matrix()(a, i)) * joint.amplitudes().segment(a * dim_b, dim_b);
    const double w = e.squaredNorm();
    if (w >= tol.zero_eigenvalue) {
      weights[static_cast<std::size_t>(i)] = w;
      total += w;
      conditionals.push_back(pure_projector(PureState(e / std::sqrt(w), detail::unchecked)));
    } else {
      weights[static_cast<std::size_t>(i)] = 0.0;
      conditionals.push_back(pure_projector(PureState::basis_state(dim_b, 0)));
    }
  }
  for (double& w : weights) w /= total;
  return CQState{ProbDist(std::move(weights), tol), basis, std::move(conditionals)};
}

namespace detail {

/// sum_j q_j S(rho_A given outcome j) for a rank-one measurement on B whose
/// vectors are the columns of `measurement`.
inline double conditional_entropy_after(const Matrix& rho_ab, Eigen::Index dim_a, Eigen::Index dim_b,
                                        const Matrix& measurement, double cutoff) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < measurement.cols(); ++j) {
    const Vector m = measurement.col(j);
    Matrix cond(dim_a, dim_a);
    for (Eigen::Index a = 0; a < dim_a; ++a)
      for (Eigen::Index a2 = 0; a2 < dim_a; ++a2)
        cond(a, a2) = m.dot(rho_ab.block(a * dim_b, a2 * dim_b, dim_b, dim_b) * m);
    const double q = cond.trace().real();
    if (q < cutoff) continue;
    cond /= q;
    cond = Matrix(0.5 * (cond + cond.adjoint()));
    total += q * von_neumann_raw(cond, cutoff);
  }
  return total;
}

}  // namespace detail

/// Average entropy left on A after measuring B in the given basis.
inline double conditional_entropy_after_measurement(const DensityMatrix& rho_ab, Eigen::Index dim_a,
                                                    Eigen::Index dim_b, const Basis& measurement,
                                                    const Tolerances& tol = default_tolerances()) {
  if (dim_a * dim_b != rho_ab.dim())
    throw DimMismatch("subsystem dimensions do not factor the joint state");
  if (measurement.dim() != dim_b) throw DimMismatch("measurement basis does not match subsystem B");
  return detail::conditional_entropy_after(rho_ab.matrix(), dim_a, dim_b, measurement.matrix(),
                                           tol.zero_eigenvalue);
}

struct DiscordResult {
  double value = 0.0;                          // bits
  Basis measurement = Basis::computational(1); // minimizing basis on B (with ancilla, if any)
  OptimizerInfo info;
};

/// The discord search explores a larger space than the randomness one, so it
/// defaults to twice the restarts.
inline OptimizerConfig discord_defaults() {
  OptimizerConfig cfg;
  cfg.restarts = 64;
  return cfg;
}

/// Discord with the measurement on subsystem B, minimized over rank-one
/// projective measurements: min_M sum_j q_j S(A|j) - S(AB) + S(B). Setting
/// ancilla_dim > 1 adjoins an ancilla in |0> to B before measuring, which
/// extends the search to general rank-one measurements with up to
/// dim_b * ancilla_dim outcomes; for the states treated here the projective
/// minimum is already tight. The result is an upper bound on the true
/// minimum, like every value this optimizer returns.
inline DiscordResult discord_b(const DensityMatrix& rho_ab, Eigen::Index dim_a, Eigen::Index dim_b,
                               const OptimizerConfig& cfg = discord_defaults(),
                               Eigen::Index ancilla_dim = 1,
                               const Tolerances& tol = default_tolerances()) {
  if (dim_a * dim_b != rho_ab.dim())
    throw DimMismatch("subsystem dimensions do not factor the joint state");
  if (ancilla_dim < 1) throw OutOfRange("ancilla dimension must be at least 1");

  const double s_ab = von_neumann(rho_ab, tol);
  const double s_b = von_neumann(partial_trace(rho_ab, dim_a, dim_b, Subsystem::B), tol);

  Eigen::Index db = dim_b;
  Matrix joint = rho_ab.matrix();
  if (ancilla_dim > 1) {  // adjoin |0><0| on B; entropies are unchanged
    db = dim_b * ancilla_dim;
    Matrix extended = Matrix::Zero(dim_a * db, dim_a * db);
    for (Eigen::Index a = 0; a < dim_a; ++a)
      for (Eigen::Index a2 = 0; a2 < dim_a; ++a2)
        for (Eigen::Index b = 0; b < dim_b; ++b)
          for (Eigen::Index b2 = 0; b2 < dim_b; ++b2)
            extended(a * db + b * ancilla_dim, a2 * db + b2 * ancilla_dim) =
                joint(a * dim_b + b, a2 * dim_b + b2);
    joint = std::move(extended);
  }

  const auto objective = [&joint, dim_a, db, &tol](const Eigen::VectorXd& params) {
    return detail::conditional_entropy_after(joint, dim_a, db,
                                             detail::unitary_from_parameters(params, db),
                                             tol.zero_eigenvalue);
  };
  const detail::SearchResult search =
      detail::restarted_minimize(objective, detail::unitary_parameter_count(db), cfg);

  DiscordResult result;
  result.value = search.value - (s_ab - s_b);
  result.measurement = Basis(detail::unitary_from_parameters(search.x, db), detail::unchecked);
  result.info = search.info;
  return result;
}

// ---------------------------------------------------------------------------
// Gap identity
// ---------------------------------------------------------------------------

/// The two randomness measures of rho together with the discord of the state
/// obtained by measuring the system half of a purification; residual is
/// |(r_classical - r_quantum) - discord|, which vanishes up to optimizer
/// noise.
struct GapReport {
  RandomnessResult classical;
  RandomnessResult quantum;
  DiscordResult discord;
  double residual = 0.0;
};

inline GapReport verify_gap(const DensityMatrix& rho, const Basis& basis,
                            const OptimizerConfig& cfg = {},
                            const OptimizerConfig& discord_cfg = discord_defaults(),
                            const Tolerances& tol = default_tolerances()) {
  if (rho.dim() != basis.dim()) throw DimMismatch("basis dimension does not match state");
  const Eigen::Index d = rho.dim();
  const CQState cq = measure_first_subsystem(purify(rho, tol), d, d, basis, tol);
  const DensityMatrix post_measurement = assemble_cq(cq);

  GapReport report;
  report.classical = r_classical(rho, basis, cfg, tol);
  report.quantum = r_quantum(rho, basis, tol);
  report.discord = discord_b(post_measurement, d, d, discord_cfg, 1, tol);
  report.residual = std::abs(report.classical.value - report.quantum.value - report.discord.value);
  return report;
}

}  // namespace qrand
