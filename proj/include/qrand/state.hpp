#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrand/errors.hpp"
#include "qrand/rng.hpp"
#include "qrand/tolerances.hpp"

namespace qrand {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace detail {

/// Tag for constructors that skip invariant checks; the caller guarantees
/// the invariants hold (used for results that are valid by construction).
struct Unchecked {};
inline constexpr Unchecked unchecked{};

inline std::string format_violation(const char* what, double measured, double allowed) {
  std::ostringstream os;
  os << what << ": measured violation " << measured << " exceeds tolerance " << allowed;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Nonnegative weights summing to one.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> weights, const Tolerances& tol = default_tolerances())
      : weights_(std::move(weights)) {
    double sum = 0.0;
    for (double w : weights_) {
      if (w < -tol.zero_eigenvalue)
        throw NotADistribution(detail::format_violation("negative probability", -w, tol.zero_eigenvalue));
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol.norm)
      throw NotADistribution(detail::format_violation("probabilities do not sum to one",
                                                      std::abs(sum - 1.0), tol.norm));
    for (double& w : weights_) w = std::max(w, 0.0);
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Unit-norm complex vector.
class PureState {
 public:
  PureState(Vector amplitudes, const Tolerances& tol = default_tolerances())
      : amplitudes_(std::move(amplitudes)) {
    const double deviation = std::abs(amplitudes_.norm() - 1.0);
    if (deviation > tol.norm)
      throw ValidationError(detail::format_violation("pure state is not normalized", deviation, tol.norm));
  }

  PureState(Vector amplitudes, detail::Unchecked) : amplitudes_(std::move(amplitudes)) {}

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }

  /// Computational basis state |k> of the given dimension.
  static PureState basis_state(Eigen::Index dim, Eigen::Index k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return PureState(std::move(v), detail::unchecked);
  }

 private:
  Vector amplitudes_;
};

/// Hermitian, positive-semidefinite, unit-trace complex matrix.
/// Construct through validate(); results of internal operations that are
/// valid by construction use the unchecked path.
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, detail::Unchecked) : matrix_(std::move(m)) {}

  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

 private:
  Matrix matrix_;
};

/// Convex mixture of pure states: (weight, state) pairs on a common dimension.
class Ensemble {
 public:
  using Member = std::pair<double, PureState>;

  Ensemble(std::vector<Member> members, const Tolerances& tol = default_tolerances())
      : members_(std::move(members)) {
    std::vector<double> w;
    w.reserve(members_.size());
    for (const auto& [weight, state] : members_) {
      w.push_back(weight);
      if (state.dim() != members_.front().second.dim())
        throw DimMismatch("ensemble members have mixed dimensions");
    }
    ProbDist check(std::move(w), tol);  // weights must form a distribution
  }

  std::size_t size() const { return members_.size(); }
  const Member& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Member>& members() const { return members_; }

  /// The mixture this ensemble decomposes: sum_i w_i |psi_i><psi_i|.
  DensityMatrix average_state() const {
    const Eigen::Index d = members_.front().second.dim();
    Matrix rho = Matrix::Zero(d, d);
    for (const auto& [w, psi] : members_)
      rho += w * (psi.amplitudes() * psi.amplitudes().adjoint());
    return DensityMatrix(std::move(rho), detail::unchecked);
  }

 private:
  std::vector<Member> members_;
};

/// Real 3-vector inside the closed unit ball; rho = (I + n.sigma)/2.
struct BlochVector {
  double nx = 0.0;
  double ny = 0.0;
  double nz = 0.0;

  double squared_norm() const { return nx * nx + ny * ny + nz * nz; }
  double norm() const { return std::sqrt(squared_norm()); }
};

/// Orthonormal basis stored column-wise as a unitary matrix.
class Basis {
 public:
  explicit Basis(Matrix columns, const Tolerances& tol = default_tolerances())
      : columns_(std::move(columns)) {
    if (columns_.rows() != columns_.cols())
      throw BasisNotOrthonormal("basis must contain dim vectors of length dim");
    const double deviation =
        (columns_.adjoint() * columns_ - Matrix::Identity(columns_.cols(), columns_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (deviation > tol.orthonormality)
      throw BasisNotOrthonormal(
          detail::format_violation("basis is not orthonormal", deviation, tol.orthonormality));
  }

  Basis(Matrix columns, detail::Unchecked) : columns_(std::move(columns)) {}

  static Basis computational(Eigen::Index dim) {
    return Basis(Matrix::Identity(dim, dim), detail::unchecked);
  }

  /// Qubit sigma_z eigenbasis {|0>, |1>}.
  static Basis pauli_z() { return computational(2); }

  /// Qubit sigma_x eigenbasis {|+>, |->}.
  static Basis pauli_x() {
    Matrix m(2, 2);
    const double s = 1.0 / std::numbers::sqrt2;
    m << s, s, s, -s;
    return Basis(std::move(m), detail::unchecked);
  }

  static Basis from_vectors(const std::vector<PureState>& vectors,
                            const Tolerances& tol = default_tolerances()) {
    if (vectors.empty()) throw BasisNotOrthonormal("basis needs at least one vector");
    Matrix m(vectors.front().dim(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].dim() != m.rows()) throw DimMismatch("basis vectors have mixed dimensions");
      m.col(static_cast<Eigen::Index>(i)) = vectors[i].amplitudes();
    }
    return Basis(std::move(m), tol);
  }

  Eigen::Index dim() const { return columns_.rows(); }
  const Matrix& matrix() const { return columns_; }
  Vector vector(Eigen::Index i) const { return columns_.col(i); }

 private:
  Matrix columns_;
};

// ---------------------------------------------------------------------------
// Deterministic Hermitian spectral decomposition
// ---------------------------------------------------------------------------

/// Eigenvalues sorted descending with near-zero values clamped to exact zero;
/// eigenvectors phase-fixed so the first non-negligible component is real
/// positive, ties between equal eigenvalues broken by ascending lexicographic
/// order of the phase-fixed vectors. This fixes the decomposition used by
/// purification and every entropy computation.
struct Spectrum {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;          // column i pairs with eigenvalues(i)
};

namespace detail {

inline void phase_fix(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > 1e-9) {
      v *= std::conj(v(i)) / a;
      return;
    }
  }
}

inline bool lexicographic_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > 1e-12) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > 1e-12) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace detail

inline Spectrum spectral_decomposition(const Matrix& hermitian,
                                       const Tolerances& tol = default_tolerances()) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  const Eigen::Index d = hermitian.rows();
  Spectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {  // solver returns ascending order
    double lambda = solver.eigenvalues()(d - 1 - i);
    if (std::abs(lambda) < tol.zero_eigenvalue) lambda = 0.0;
    s.eigenvalues(i) = lambda;
    s.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    detail::phase_fix(s.eigenvectors.col(i));
  }
  // normalize the ordering inside degenerate eigenspaces
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && std::abs(s.eigenvalues(end) - s.eigenvalues(start)) <= tol.zero_eigenvalue) ++end;
    if (end - start > 1) {
      std::vector<Vector> group;
      for (Eigen::Index i = start; i < end; ++i) group.push_back(s.eigenvectors.col(i));
      std::sort(group.begin(), group.end(), detail::lexicographic_less);
      for (Eigen::Index i = start; i < end; ++i) s.eigenvectors.col(i) = group[i - start];
    }
    start = end;
  }
  return s;
}

inline Spectrum spectral_decomposition(const DensityMatrix& rho,
                                       const Tolerances& tol = default_tolerances()) {
  return spectral_decomposition(rho.matrix(), tol);
}

/// Number of eigenvalues at or above the zero cutoff.
inline Eigen::Index rank(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) {
  const Spectrum s = spectral_decomposition(rho, tol);
  Eigen::Index r = 0;
  while (r < s.eigenvalues.size() && s.eigenvalues(r) >= tol.zero_eigenvalue) ++r;
  return std::max<Eigen::Index>(r, 1);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Checks the three density-matrix invariants. Eigenvalues in [-psd_tol, 0)
/// are clamped to zero and the spectrum renormalized; small anti-Hermitian
/// noise within tolerance is symmetrized away.
inline DensityMatrix validate(const Matrix& m, const Tolerances& tol = default_tolerances()) {
  if (m.rows() != m.cols()) throw DimMismatch("density matrix must be square");
  if (m.rows() == 0) throw DimMismatch("density matrix must have positive dimension");

  const double herm_violation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_violation > tol.hermiticity)
    throw NotHermitian(detail::format_violation("matrix is not Hermitian", herm_violation, tol.hermiticity));

  const double trace_violation = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
  if (trace_violation > tol.trace)
    throw TraceNotOne(detail::format_violation("trace is not one", trace_violation, tol.trace));

  Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd)
    throw NotPSD(detail::format_violation("matrix is not positive semidefinite", -min_eig, tol.psd));

  if (min_eig < 0.0) {
    Eigen::VectorXd clamped = solver.eigenvalues().cwiseMax(0.0);
    clamped /= clamped.sum();
    sym = solver.eigenvectors() * clamped.asDiagonal() * solver.eigenvectors().adjoint();
    sym = 0.5 * (sym + sym.adjoint());
  }
  return DensityMatrix(std::move(sym), detail::unchecked);
}

inline DensityMatrix pure_projector(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), detail::unchecked);
}

/// Kronecker products; indices are A-major: joint index = a * dim_b + b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), detail::unchecked);
}

inline PureState tensor(const PureState& a, const PureState& b) {
  Vector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(out), detail::unchecked);
}

enum class Subsystem { A, B };

/// Reduced state of the kept subsystem of a bipartite dim_a x dim_b state.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Eigen::Index dim_a, Eigen::Index dim_b,
                                   Subsystem keep) {
  if (dim_a * dim_b != rho.dim())
    throw DimMismatch("partial trace dims " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                      " do not factor dimension " + std::to_string(rho.dim()));
  const Matrix& m = rho.matrix();
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    out = Matrix(0.5 * (out + out.adjoint()));
    return DensityMatrix(std::move(out), detail::unchecked);
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index a = 0; a < dim_a; ++a) out(i, j) += m(a * dim_b + i, a * dim_b + j);
  out = Matrix(0.5 * (out + out.adjoint()));
  return DensityMatrix(std::move(out), detail::unchecked);
}

/// Purification on dim^2: sum_i sqrt(lambda_i) |a_i> (x) |e_i> with {|e_i>}
/// the computational basis of an environment of the same dimension. The
/// spectral decomposition fixes the result deterministically; the global
/// phase is irrelevant to every downstream quantity.
inline PureState purify(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) {
  const Spectrum s = spectral_decomposition(rho, tol);
  const Eigen::Index d = rho.dim();
  Vector psi = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (s.eigenvalues(i) <= 0.0) continue;
    const double w = std::sqrt(s.eigenvalues(i));
    for (Eigen::Index a = 0; a < d; ++a) psi(a * d + i) += w * s.eigenvectors(a, i);
  }
  psi /= psi.norm();
  return PureState(std::move(psi), detail::unchecked);
}

/// Outcome distribution of a projective measurement in the given basis.
inline ProbDist measurement_distribution(const DensityMatrix& rho, const Basis& basis) {
  if (basis.dim() != rho.dim()) throw DimMismatch("basis dimension does not match state");
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    const Vector b = basis.vector(i);
    p[static_cast<std::size_t>(i)] = std::max(0.0, (b.adjoint() * rho.matrix() * b)(0, 0).real());
  }
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= sum;
  return ProbDist(std::move(p));
}

/// Full dephasing in the given basis: sum_i <i|rho|i> |i><i|.
inline DensityMatrix dephase(const DensityMatrix& rho, const Basis& basis) {
  if (basis.dim() != rho.dim()) throw DimMismatch("basis dimension does not match state");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    const Vector b = basis.vector(i);
    const double p = (b.adjoint() * rho.matrix() * b)(0, 0).real();
    out += std::max(0.0, p) * (b * b.adjoint());
  }
  out = Matrix(0.5 * (out + out.adjoint()));
  return DensityMatrix(std::move(out), detail::unchecked);
}

// ---------------------------------------------------------------------------
// Bloch-sphere parametrization (qubits)
// ---------------------------------------------------------------------------

inline DensityMatrix bloch_to_state(const BlochVector& n, const Tolerances& tol = default_tolerances()) {
  const double excess = n.squared_norm() - 1.0;
  if (excess > tol.norm)
    throw NormExceedsOne(detail::format_violation("Bloch vector lies outside the unit ball", excess, tol.norm));
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + n.nz);
  m(1, 1) = 0.5 * (1.0 - n.nz);
  m(0, 1) = 0.5 * Complex(n.nx, -n.ny);
  m(1, 0) = 0.5 * Complex(n.nx, n.ny);
  return DensityMatrix(std::move(m), detail::unchecked);
}

inline BlochVector state_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimMismatch("Bloch vector is defined for qubits only");
  const Matrix& m = rho.matrix();
  BlochVector n;
  n.nx = 2.0 * m(1, 0).real();
  n.ny = 2.0 * m(1, 0).imag();
  n.nz = (m(0, 0) - m(1, 1)).real();
  return n;
}

/// Bloch vector uniform in the closed unit ball (rejection sampling).
inline BlochVector random_bloch_in_ball(Rng& rng) {
  while (true) {
    BlochVector n{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (n.squared_norm() <= 1.0) return n;
  }
}

/// Haar-random orthonormal basis of the given dimension.
inline Basis random_basis(Rng& rng, Eigen::Index dim) {
  return Basis(rng.haar_unitary(dim), detail::unchecked);
}

/// Random mixed state: eigenvalues from a flat simplex sample, Haar eigenbasis.
inline DensityMatrix random_density_matrix(Rng& rng, Eigen::Index dim) {
  std::vector<double> cuts;
  cuts.reserve(static_cast<std::size_t>(dim) + 1);
  cuts.push_back(0.0);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) cuts.push_back(rng.uniform());
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  Eigen::VectorXd lambda(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    lambda(i) = cuts[static_cast<std::size_t>(i) + 1] - cuts[static_cast<std::size_t>(i)];
  const Matrix u = rng.haar_unitary(dim);
  Matrix m = u * lambda.asDiagonal() * u.adjoint();
  m = Matrix(0.5 * (m + m.adjoint()));
  return DensityMatrix(std::move(m), detail::unchecked);
}

inline PureState random_pure_state(Rng& rng, Eigen::Index dim) {
  Vector v = rng.complex_normal_vector(dim);
  v /= v.norm();
  return PureState(std::move(v), detail::unchecked);
}

}  // namespace qrand
