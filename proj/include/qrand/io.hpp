#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qrand/errors.hpp"
#include "qrand/locking.hpp"
#include "qrand/state.hpp"

// JSON formats:
//
//   density state   {"dim": d, "matrix": [[[re, im], ...], ...]}
//   pure state      {"dim": d, "vector": [[re, im], ...]}
//   basis           {"dim": d, "vectors": [[[re, im], ...], ...]}
//   scenario        {"probs": [...], "carriers": [pure states],
//                    "labels": optional basis}
//
// Loaders reject malformed structure and non-finite numbers with ParseError;
// the resulting objects still pass through the usual invariant checks.

namespace qrand::io {

using json = nlohmann::json;

namespace detail {

inline double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": number is not finite");
  return x;
}

inline Complex complex_entry(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [re, im]");
  return {finite_number(j[0], where), finite_number(j[1], where)};
}

inline Eigen::Index dimension(const json& j, const std::string& where) {
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw ParseError(where + ": needs a positive integer \"dim\"");
  return static_cast<Eigen::Index>(j["dim"].get<long long>());
}

inline Vector vector_entries(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || std::cmp_not_equal(j.size(), dim))
    throw ParseError(where + ": expected " + std::to_string(dim) + " entries");
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v(i) = complex_entry(j[static_cast<std::size_t>(i)], where);
  return v;
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

}  // namespace detail

inline json to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < rho.dim(); ++j) row.push_back(detail::complex_to_json(rho(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"dim", rho.dim()}, {"matrix", std::move(rows)}};
}

inline json to_json(const PureState& psi) {
  return json{{"dim", psi.dim()}, {"vector", detail::vector_to_json(psi.amplitudes())}};
}

inline json to_json(const Basis& basis) {
  json vectors = json::array();
  for (Eigen::Index i = 0; i < basis.dim(); ++i)
    vectors.push_back(detail::vector_to_json(basis.vector(i)));
  return json{{"dim", basis.dim()}, {"vectors", std::move(vectors)}};
}

inline json to_json(const EncodingScenario& scenario) {
  json carriers = json::array();
  for (const PureState& c : scenario.carriers) carriers.push_back(to_json(c));
  return json{{"probs", scenario.message_probs.weights()},
              {"carriers", std::move(carriers)},
              {"labels", to_json(scenario.labels)}};
}

inline DensityMatrix density_matrix_from_json(const json& j,
                                              const Tolerances& tol = default_tolerances()) {
  const Eigen::Index d = detail::dimension(j, "density state");
  if (!j.contains("matrix") || !j["matrix"].is_array() || std::cmp_not_equal(j["matrix"].size(), d))
    throw ParseError("density state: needs a \"matrix\" with dim rows");
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    m.row(i) = detail::vector_entries(j["matrix"][static_cast<std::size_t>(i)], d,
                                      "density state row " + std::to_string(i))
                   .transpose();
  return validate(m, tol);
}

inline PureState pure_state_from_json(const json& j, const Tolerances& tol = default_tolerances()) {
  const Eigen::Index d = detail::dimension(j, "pure state");
  if (!j.contains("vector")) throw ParseError("pure state: needs a \"vector\"");
  return PureState(detail::vector_entries(j["vector"], d, "pure state"), tol);
}

/// Accepts either state form; a pure state becomes its projector.
inline DensityMatrix state_from_json(const json& j, const Tolerances& tol = default_tolerances()) {
  if (!j.is_object()) throw ParseError("state: expected an object");
  if (j.contains("matrix")) return density_matrix_from_json(j, tol);
  if (j.contains("vector")) return pure_projector(pure_state_from_json(j, tol));
  throw ParseError("state: needs either a \"matrix\" or a \"vector\"");
}

inline Basis basis_from_json(const json& j, const Tolerances& tol = default_tolerances()) {
  const Eigen::Index d = detail::dimension(j, "basis");
  if (!j.contains("vectors") || !j["vectors"].is_array() || std::cmp_not_equal(j["vectors"].size(), d))
    throw ParseError("basis: needs \"vectors\" with dim entries");
  Matrix columns(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    columns.col(i) = detail::vector_entries(j["vectors"][static_cast<std::size_t>(i)], d,
                                            "basis vector " + std::to_string(i));
  return Basis(std::move(columns), tol);
}

inline EncodingScenario scenario_from_json(const json& j,
                                           const Tolerances& tol = default_tolerances()) {
  if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array())
    throw ParseError("scenario: needs a \"probs\" array");
  if (!j.contains("carriers") || !j["carriers"].is_array())
    throw ParseError("scenario: needs a \"carriers\" array");

  std::vector<double> probs;
  probs.reserve(j["probs"].size());
  for (std::size_t i = 0; i < j["probs"].size(); ++i)
    probs.push_back(detail::finite_number(j["probs"][i], "scenario probability " + std::to_string(i)));

  std::vector<PureState> carriers;
  carriers.reserve(j["carriers"].size());
  for (const json& c : j["carriers"]) carriers.push_back(pure_state_from_json(c, tol));

  std::optional<Basis> labels;
  if (j.contains("labels") && !j["labels"].is_null()) labels = basis_from_json(j["labels"], tol);
  return make_scenario(ProbDist(std::move(probs), tol), std::move(carriers), std::move(labels));
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline DensityMatrix load_state(const std::string& path, const Tolerances& tol = default_tolerances()) {
  return state_from_json(load_json(path), tol);
}

inline Basis load_basis(const std::string& path, const Tolerances& tol = default_tolerances()) {
  return basis_from_json(load_json(path), tol);
}

inline EncodingScenario load_scenario(const std::string& path,
                                      const Tolerances& tol = default_tolerances()) {
  return scenario_from_json(load_json(path), tol);
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace qrand::io
