#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qrand/errors.hpp"
#include "qrand/rng.hpp"
#include "qrand/state.hpp"

namespace qrand {

/// Settings shared by both numerical searches (convex roof and discord).
/// ensemble_size = 0 selects the default rank(rho)^2; the seed fixes every
/// random restart, so results are reproducible bit for bit.
struct OptimizerConfig {
  int restarts = 32;
  int ensemble_size = 0;  // 0: use rank^2
  int max_iters = 2000;
  double tol = 1e-7;
  std::uint64_t seed = 0;
};

struct OptimizerInfo {
  int restarts_used = 0;
  int best_iterations = 0;
  bool converged = true;
};

namespace detail {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Classic Nelder-Mead simplex descent (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Converges when the simplex value spread
/// falls below tol.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0, double initial_step, double tol,
                                    int max_iters) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i) + 1](i) += initial_step;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  auto sort_simplex = [&] {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };

  NelderMeadResult result;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    sort_simplex();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    if (vals[worst] - vals[best] < tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] != worst) centroid += pts[order[i]];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double f_reflected = f(reflected);

    if (f_reflected < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
    } else if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < vals[worst];
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
      const double f_contracted = f(contracted);
      if (f_contracted < std::min(f_reflected, vals[worst])) {
        pts[worst] = contracted;
        vals[worst] = f_contracted;
      } else {
        for (std::size_t i = 1; i < order.size(); ++i) {
          pts[order[i]] = pts[best] + 0.5 * (pts[order[i]] - pts[best]);
          vals[order[i]] = f(pts[order[i]]);
        }
      }
    }
  }
  sort_simplex();
  result.x = pts[order.front()];
  result.value = vals[order.front()];
  result.iterations = iter;
  return result;
}

/// Unitary exp(iH) from n^2 real parameters filling a Hermitian generator:
/// the first n parameters are the diagonal, the rest the re/im parts of the
/// upper triangle.
inline Matrix unitary_from_parameters(const Eigen::VectorXd& params, Eigen::Index n) {
  Matrix h = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = params(k++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = Complex(params(k), params(k + 1));
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Vector phases(n);
  for (Eigen::Index i = 0; i < n; ++i)
    phases(i) = std::exp(Complex(0.0, solver.eigenvalues()(i)));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

inline Eigen::Index unitary_parameter_count(Eigen::Index n) { return n * n; }

struct SearchResult {
  Eigen::VectorXd x;
  double value = 0.0;
  OptimizerInfo info;
};

/// Seeded multistart driver: cfg.restarts independent Nelder-Mead descents
/// from uniform random starts, followed by one refinement descent from the
/// incumbent. Restarts are order-independent by construction (substream
/// seeds derived per index, merge by lexicographic (value, index) minimum),
/// so a fixed seed gives one answer regardless of evaluation schedule.
inline SearchResult restarted_minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                       Eigen::Index n_params, const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw OutOfRange("optimizer needs at least one restart");
  if (cfg.tol <= 0.0) throw OutOfRange("optimizer tolerance must be positive");

  NelderMeadResult best;
  int best_index = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd x0(n_params);
    for (Eigen::Index i = 0; i < n_params; ++i) x0(i) = rng.uniform(-std::numbers::pi, std::numbers::pi);
    NelderMeadResult run = nelder_mead(objective, x0, 0.5, cfg.tol, cfg.max_iters);
    if (best_index < 0 || run.value < best.value) {
      best = std::move(run);
      best_index = r;
    }
  }

  // refine the incumbent with a tight small-step descent
  NelderMeadResult polish = nelder_mead(objective, best.x, 0.05, cfg.tol * 1e-2, cfg.max_iters);
  const bool improved = polish.value <= best.value;

  SearchResult result;
  result.x = improved ? polish.x : best.x;
  result.value = improved ? polish.value : best.value;
  result.info.restarts_used = cfg.restarts;
  result.info.best_iterations = best.iterations + polish.iterations;
  result.info.converged = best.converged && polish.converged;
  return result;
}

}  // namespace detail
}  // namespace qrand
