#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qrand/qrand.hpp"

using namespace qrand;
using Catch::Matchers::WithinAbs;

namespace {

PureState plus_state() {
  Vector v(2);
  v << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  return PureState(std::move(v));
}

DensityMatrix mix_with_identity(double v) {  // v|+><+| + (1-v) I/2
  return bloch_to_state({v, 0.0, 0.0});
}

}  // namespace

TEST_CASE("quantum randomness is the coherence destroyed by the measurement") {
  const Basis z = Basis::pauli_z();

  // incoherent states carry none
  REQUIRE_THAT(r_quantum(bloch_to_state({0.0, 0.0, 0.7}), z).value, WithinAbs(0.0, 1e-12));

  // a conjugate-basis pure state carries a full bit
  REQUIRE_THAT(r_quantum(pure_projector(plus_state()), z).value, WithinAbs(1.0, 1e-12));
  // and none when measured in its own basis
  REQUIRE_THAT(r_quantum(pure_projector(plus_state()), Basis::pauli_x()).value,
               WithinAbs(0.0, 1e-12));

  REQUIRE_THAT(r_quantum(mix_with_identity(0.25), z).value, WithinAbs(0.045565997075034947, 1e-12));
  REQUIRE_THAT(r_quantum(mix_with_identity(0.5), z).value, WithinAbs(0.18872187554086717, 1e-12));
  REQUIRE_THAT(r_quantum(mix_with_identity(0.75), z).value, WithinAbs(0.4564355568004036, 1e-12));
  REQUIRE_THAT(r_quantum(bloch_to_state({0.3, -0.2, 0.4}), z).value,
               WithinAbs(0.10198878140595213, 1e-12));

  REQUIRE_THROWS_AS(r_quantum(bloch_to_state({0.1, 0.0, 0.0}), Basis::computational(3)),
                    DimMismatch);
}

TEST_CASE("pure-state randomness is the measurement entropy") {
  REQUIRE_THAT(pure_state_randomness(plus_state(), Basis::pauli_z()), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(pure_state_randomness(plus_state(), Basis::pauli_x()), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(pure_state_randomness(PureState::basis_state(4, 1), Basis::computational(4)),
               WithinAbs(0.0, 1e-12));
  REQUIRE_THROWS_AS(pure_state_randomness(plus_state(), Basis::computational(3)), DimMismatch);
}

TEST_CASE("qubit closed form of the convex roof") {
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.25, 0.0, 0.0}), WithinAbs(0.11761887377091781, 1e-14));
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.5, 0.0, 0.0}), WithinAbs(0.35457890266527003, 1e-14));
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.75, 0.0, 0.0}), WithinAbs(0.65605756297271467, 1e-14));

  // only the transverse part matters
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.3, 0.4, 0.0}),
               WithinAbs(r_classical_qubit(BlochVector{0.5, 0.0, 0.0}), 1e-14));
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.5, 0.0, 0.6}),
               WithinAbs(r_classical_qubit(BlochVector{0.5, 0.0, 0.0}), 1e-14));

  // extremes: incoherent gives zero, conjugate pure gives one bit
  REQUIRE_THAT(r_classical_qubit(BlochVector{0.0, 0.0, 1.0}), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(r_classical_qubit(BlochVector{1.0, 0.0, 0.0}), WithinAbs(1.0, 1e-14));

  REQUIRE_THROWS_AS(r_classical_qubit(BlochVector{1.0, 0.2, 0.0}), NormExceedsOne);

  // the basis overload reduces to the rotated frame
  REQUIRE_THAT(r_classical_qubit(bloch_to_state({0.0, 0.0, 0.5}), Basis::pauli_x()),
               WithinAbs(0.35457890266527003, 1e-12));
  REQUIRE_THROWS_AS(r_classical_qubit(bloch_to_state({0.1, 0.0, 0.0}), Basis::computational(3)),
                    DimMismatch);
}

TEST_CASE("convex-roof search resolves pure and incoherent states in closed form") {
  const Basis z = Basis::pauli_z();

  const RandomnessResult pure = r_classical(pure_projector(plus_state()), z);
  REQUIRE(pure.method == Method::closed_form);
  REQUIRE_THAT(pure.value, WithinAbs(1.0, 1e-12));
  REQUIRE(pure.ensemble.has_value());
  REQUIRE(pure.ensemble->size() == 1);

  const RandomnessResult incoherent = r_classical(bloch_to_state({0.0, 0.0, 0.4}), z);
  REQUIRE(incoherent.method == Method::closed_form);
  REQUIRE(incoherent.value == 0.0);
  REQUIRE(incoherent.ensemble->size() == 2);
  // the diagonal ensemble reassembles the state
  REQUIRE_THAT((incoherent.ensemble->average_state().matrix() -
                bloch_to_state({0.0, 0.0, 0.4}).matrix())
                   .cwiseAbs()
                   .maxCoeff(),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("convex-roof search matches the qubit closed form") {
  const Basis z = Basis::pauli_z();
  for (double v : {0.25, 0.5, 0.75}) {
    const RandomnessResult result = r_classical(mix_with_identity(v), z);
    REQUIRE(result.method == Method::convex_roof_optimizer);
    REQUIRE(result.info.converged);
    REQUIRE_THAT(result.value, WithinAbs(r_classical_qubit(BlochVector{v, 0.0, 0.0}), 1e-6));
  }

  const DensityMatrix generic = bloch_to_state({0.3, -0.2, 0.4});
  const RandomnessResult result = r_classical(generic, z);
  REQUIRE_THAT(result.value, WithinAbs(0.212286610800242, 1e-6));

  // the minimizing ensemble is a genuine decomposition of the state
  REQUIRE(result.ensemble.has_value());
  REQUIRE_THAT((result.ensemble->average_state().matrix() - generic.matrix()).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-8));
  // and its average measurement entropy is the reported value
  double avg = 0.0;
  for (const auto& [w, psi] : result.ensemble->members()) avg += w * pure_state_randomness(psi, z);
  REQUIRE_THAT(avg, WithinAbs(result.value, 1e-9));
}

TEST_CASE("convex-roof search works in rotated frames") {
  // diagonal state measured in the conjugate basis
  const DensityMatrix rho = bloch_to_state({0.0, 0.0, 0.5});
  const RandomnessResult result = r_classical(rho, Basis::pauli_x());
  REQUIRE_THAT(result.value, WithinAbs(0.35457890266527003, 1e-6));
}

TEST_CASE("convex-roof search is deterministic in its seed") {
  const DensityMatrix rho = bloch_to_state({0.3, -0.2, 0.4});
  const Basis z = Basis::pauli_z();

  const RandomnessResult a = r_classical(rho, z);
  const RandomnessResult b = r_classical(rho, z);
  REQUIRE(a.value == b.value);

  OptimizerConfig other;
  other.seed = 123;
  const RandomnessResult c = r_classical(rho, z, other);
  REQUIRE_THAT(c.value, WithinAbs(a.value, 1e-6));
}

TEST_CASE("convex-roof search validates its configuration") {
  const DensityMatrix rho = bloch_to_state({0.3, -0.2, 0.4});
  const Basis z = Basis::pauli_z();

  OptimizerConfig tiny;
  tiny.ensemble_size = 1;  // below the rank
  REQUIRE_THROWS_AS(r_classical(rho, z, tiny), OutOfRange);

  OptimizerConfig wide;
  wide.ensemble_size = 6;
  REQUIRE_THAT(r_classical(rho, z, wide).value, WithinAbs(0.212286610800242, 1e-5));

  REQUIRE_THROWS_AS(r_classical(rho, Basis::computational(3)), DimMismatch);
}

TEST_CASE("the gap between the measures is nonnegative") {
  const Basis z = Basis::pauli_z();
  Rng rng(21);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = bloch_to_state(random_bloch_in_ball(rng));
    REQUIRE(randomness_gap(rho, z) >= -1e-9);
  }
}
