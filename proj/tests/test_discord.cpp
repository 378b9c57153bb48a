#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qrand/qrand.hpp"

using namespace qrand;
using Catch::Matchers::WithinAbs;

namespace {

/// The four conjugate-basis states written as a classical-quantum state:
/// (1/4) sum_i |i><i| (x) |c_i><c_i|.
CQState conjugate_cq() {
  return post_measurement_state(bb84_scenario());
}

}  // namespace

TEST_CASE("classical-quantum states assemble block-diagonally") {
  Vector plus(2);
  plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  const CQState cq{ProbDist({0.75, 0.25}),
                   Basis::computational(2),
                   {pure_projector(PureState::basis_state(2, 0)), pure_projector(PureState(plus))}};
  const DensityMatrix rho = assemble_cq(cq);
  REQUIRE(rho.dim() == 4);
  REQUIRE_NOTHROW(validate(rho.matrix()));
  REQUIRE_THAT(rho(0, 0).real(), WithinAbs(0.75, 1e-12));
  REQUIRE_THAT(rho(2, 2).real(), WithinAbs(0.125, 1e-12));
  REQUIRE_THAT(rho(2, 3).real(), WithinAbs(0.125, 1e-12));
  REQUIRE_THAT(std::abs(rho(0, 2)), WithinAbs(0.0, 1e-12));  // no cross-pointer coherence

  const CQState broken{ProbDist({1.0}), Basis::computational(2),
                       {pure_projector(PureState::basis_state(2, 0))}};
  REQUIRE_THROWS_AS(assemble_cq(broken), DimMismatch);
}

TEST_CASE("measuring half of a pure state yields its conditional ensemble") {
  // product state: one certain outcome
  const PureState product = tensor(PureState::basis_state(2, 1), PureState::basis_state(3, 2));
  const CQState cq = measure_first_subsystem(product, 2, 3, Basis::pauli_z());
  REQUIRE_THAT(cq.weights[1], WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(cq.conditionals[1](2, 2).real(), WithinAbs(1.0, 1e-12));

  // Bell state: uniform outcomes with perfectly correlated conditionals
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const CQState bell_cq = measure_first_subsystem(PureState(std::move(bell)), 2, 2, Basis::pauli_z());
  REQUIRE_THAT(bell_cq.weights[0], WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(bell_cq.conditionals[0](0, 0).real(), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(bell_cq.conditionals[1](1, 1).real(), WithinAbs(1.0, 1e-12));

  REQUIRE_THROWS_AS(measure_first_subsystem(product, 4, 2, Basis::computational(4)), DimMismatch);
  REQUIRE_THROWS_AS(measure_first_subsystem(product, 2, 3, Basis::computational(3)), DimMismatch);
}

TEST_CASE("conditional entropy after a measurement on the carrier") {
  const DensityMatrix cq = assemble_cq(conjugate_cq());

  // measuring the carrier in either conjugate basis leaves H(1/2,0,1/4,1/4)
  REQUIRE_THAT(conditional_entropy_after_measurement(cq, 4, 2, Basis::pauli_z()),
               WithinAbs(1.5, 1e-12));
  REQUIRE_THAT(conditional_entropy_after_measurement(cq, 4, 2, Basis::pauli_x()),
               WithinAbs(1.5, 1e-12));

  // orthogonal conditionals are perfectly distinguishable
  const CQState classical{
      ProbDist({0.5, 0.5}),
      Basis::computational(2),
      {pure_projector(PureState::basis_state(2, 0)), pure_projector(PureState::basis_state(2, 1))}};
  REQUIRE_THAT(conditional_entropy_after_measurement(assemble_cq(classical), 2, 2, Basis::pauli_z()),
               WithinAbs(0.0, 1e-12));

  REQUIRE_THROWS_AS(conditional_entropy_after_measurement(cq, 4, 2, Basis::computational(4)),
                    DimMismatch);
  REQUIRE_THROWS_AS(conditional_entropy_after_measurement(cq, 3, 2, Basis::pauli_z()), DimMismatch);
}

TEST_CASE("discord of the conjugate-basis classical-quantum state is half a bit") {
  const DensityMatrix cq = assemble_cq(conjugate_cq());

  // entropies entering the discord: S(AB) = 2, S(B) = 1
  REQUIRE_THAT(von_neumann(cq), WithinAbs(2.0, 1e-10));
  REQUIRE_THAT(von_neumann(partial_trace(cq, 4, 2, Subsystem::B)), WithinAbs(1.0, 1e-10));

  const DiscordResult d = discord_b(cq, 4, 2);
  REQUIRE_THAT(d.value, WithinAbs(0.5, 1e-4));
  REQUIRE(d.info.converged);
  REQUIRE_NOTHROW(Basis(d.measurement.matrix()));  // the minimizer is a genuine basis

  // an ancilla cannot unlock more than the projective minimum here
  OptimizerConfig cfg = discord_defaults();
  cfg.restarts = 16;
  const DiscordResult with_ancilla = discord_b(cq, 4, 2, cfg, 2);
  REQUIRE_THAT(with_ancilla.value, WithinAbs(0.5, 2e-3));
}

TEST_CASE("classically correlated states carry no discord") {
  // diagonal joint distribution on two bits
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.4;
  m(1, 1) = 0.1;
  m(2, 2) = 0.2;
  m(3, 3) = 0.3;
  const DiscordResult d = discord_b(DensityMatrix(std::move(m), detail::unchecked), 2, 2);
  REQUIRE_THAT(d.value, WithinAbs(0.0, 1e-9));

  // product states as well
  const DiscordResult p =
      discord_b(tensor(bloch_to_state({0.3, -0.2, 0.4}), bloch_to_state({0.0, 0.5, 0.1})), 2, 2);
  REQUIRE_THAT(p.value, WithinAbs(0.0, 1e-9));
}

TEST_CASE("discord rejects malformed inputs") {
  const DensityMatrix cq = assemble_cq(conjugate_cq());
  REQUIRE_THROWS_AS(discord_b(cq, 3, 2), DimMismatch);
  REQUIRE_THROWS_AS(discord_b(cq, 4, 2, discord_defaults(), 0), OutOfRange);
}

TEST_CASE("the gap identity holds state by state") {
  const Basis z = Basis::pauli_z();

  const GapReport generic = verify_gap(bloch_to_state({0.3, -0.2, 0.4}), z);
  REQUIRE_THAT(generic.classical.value, WithinAbs(0.212286610800242, 1e-5));
  REQUIRE_THAT(generic.quantum.value, WithinAbs(0.10198878140595213, 1e-12));
  REQUIRE_THAT(generic.discord.value, WithinAbs(0.11029782939428986, 1e-4));
  REQUIRE(generic.residual <= 1e-4);

  // rotated frame
  const GapReport rotated = verify_gap(bloch_to_state({0.0, 0.3, 0.5}), Basis::pauli_x());
  REQUIRE(rotated.residual <= 1e-4);

  // incoherent states sit at zero on all three quantities
  const GapReport flat = verify_gap(bloch_to_state({0.0, 0.0, 0.6}), z);
  REQUIRE_THAT(flat.classical.value, WithinAbs(0.0, 1e-9));
  REQUIRE_THAT(flat.quantum.value, WithinAbs(0.0, 1e-9));
  REQUIRE_THAT(flat.discord.value, WithinAbs(0.0, 1e-9));

  REQUIRE_THROWS_AS(verify_gap(bloch_to_state({0.1, 0.0, 0.0}), Basis::computational(3)),
                    DimMismatch);
}
