#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qrand/discord.hpp"
#include "qrand/randomness.hpp"
#include "qrand/state.hpp"

// Key locking: a classical message encoded into non-orthogonal carrier
// states. Holding the carrier system ("the key") before the labels are
// measured is worth more than holding it after — the difference is exactly
// the discord of the post-measurement state.

namespace qrand {

/// Messages with prior probabilities, one carrier state per message, and an
/// orthonormal label basis on the message register.
struct EncodingScenario {
  ProbDist message_probs;
  std::vector<PureState> carriers;
  Basis labels;
};

inline EncodingScenario make_scenario(ProbDist probs, std::vector<PureState> carriers,
                                      std::optional<Basis> labels = std::nullopt) {
  if (carriers.empty()) throw DimMismatch("scenario needs at least one carrier");
  if (carriers.size() != probs.size())
    throw DimMismatch("scenario needs one carrier per message probability");
  for (const PureState& c : carriers)
    if (c.dim() != carriers.front().dim()) throw DimMismatch("carriers have mixed dimensions");
  const auto n = static_cast<Eigen::Index>(probs.size());
  Basis label_basis = labels ? std::move(*labels) : Basis::computational(n);
  if (label_basis.dim() != n) throw DimMismatch("label basis does not match the message count");
  return EncodingScenario{std::move(probs), std::move(carriers), std::move(label_basis)};
}

/// Four equiprobable messages carried by the two conjugate qubit bases:
/// |0>, |1>, |+>, |->.
inline EncodingScenario bb84_scenario() {
  const double s = 1.0 / std::numbers::sqrt2;
  Vector plus(2), minus(2);
  plus << s, s;
  minus << s, -s;
  std::vector<PureState> carriers;
  carriers.push_back(PureState::basis_state(2, 0));
  carriers.push_back(PureState::basis_state(2, 1));
  carriers.emplace_back(std::move(plus), detail::unchecked);
  carriers.emplace_back(std::move(minus), detail::unchecked);
  return make_scenario(ProbDist({0.25, 0.25, 0.25, 0.25}), std::move(carriers));
}

/// Coherent record of the encoding: sum_i sqrt(p_i) |label_i> (x) |carrier_i>.
/// Orthonormal labels make this a unit vector.
inline PureState build_joint(const EncodingScenario& scenario) {
  const Eigen::Index n = scenario.labels.dim();
  const Eigen::Index dc = scenario.carriers.front().dim();
  Vector joint = Vector::Zero(n * dc);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = std::sqrt(scenario.message_probs[static_cast<std::size_t>(i)]);
    if (w == 0.0) continue;
    const Vector label = scenario.labels.vector(i);
    for (Eigen::Index a = 0; a < n; ++a)
      joint.segment(a * dc, dc) +=
          w * label(a) * scenario.carriers[static_cast<std::size_t>(i)].amplitudes();
  }
  joint /= joint.norm();
  return PureState(std::move(joint), detail::unchecked);
}

/// The classical-quantum state after the labels are measured:
/// sum_i p_i |label_i><label_i| (x) |carrier_i><carrier_i|.
inline CQState post_measurement_state(const EncodingScenario& scenario,
                                      const Tolerances& tol = default_tolerances()) {
  return measure_first_subsystem(build_joint(scenario), scenario.labels.dim(),
                                 scenario.carriers.front().dim(), scenario.labels, tol);
}

struct LockingReport {
  double message_entropy = 0.0;          // H(p): the full key content
  double key_before_measurement = 0.0;   // convex-roof randomness of the label measurement
  double key_after_measurement = 0.0;    // relative-entropy randomness
  double locking_advantage = 0.0;        // discord of the post-measurement state
  double accessible_with_purification = 0.0;  // message_entropy - key_after_measurement
  double gap_residual = 0.0;             // |(before - after) - advantage|
  OptimizerInfo randomness_info;
  OptimizerInfo discord_info;
};

/// Full locking analysis of a scenario. The label-register state is the
/// reduced half of the coherent record; its two randomness measures give the
/// key value before and after the carrier-side coherence is destroyed, and
/// the discord of the post-measurement state accounts for the difference.
inline LockingReport locking_report(const EncodingScenario& scenario,
                                    const OptimizerConfig& cfg = {},
                                    const OptimizerConfig& discord_cfg = discord_defaults(),
                                    const Tolerances& tol = default_tolerances()) {
  const Eigen::Index n = scenario.labels.dim();
  const Eigen::Index dc = scenario.carriers.front().dim();
  const PureState joint = build_joint(scenario);
  const DensityMatrix labels_state = partial_trace(pure_projector(joint), n, dc, Subsystem::A);

  const RandomnessResult before = r_classical(labels_state, scenario.labels, cfg, tol);
  const RandomnessResult after = r_quantum(labels_state, scenario.labels, tol);
  const DiscordResult advantage =
      discord_b(assemble_cq(measure_first_subsystem(joint, n, dc, scenario.labels, tol)), n, dc,
                discord_cfg, 1, tol);

  LockingReport report;
  report.message_entropy = shannon(scenario.message_probs, tol);
  report.key_before_measurement = before.value;
  report.key_after_measurement = after.value;
  report.locking_advantage = advantage.value;
  report.accessible_with_purification = report.message_entropy - report.key_after_measurement;
  report.gap_residual =
      std::abs((report.key_before_measurement - report.key_after_measurement) - advantage.value);
  report.randomness_info = before.info;
  report.discord_info = advantage.info;
  return report;
}

}  // namespace qrand
