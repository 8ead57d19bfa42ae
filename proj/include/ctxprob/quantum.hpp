#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctxprob/formula.hpp"
#include "ctxprob/q_structure.hpp"

namespace ctxprob {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Eigen::Index kMaxDimension = 8;
/// Absolute tolerance for operator invariants and probability identities.
inline constexpr double kOperatorTolerance = 1e-9;
/// Eigenvalue cutoff for rank decisions and the range-inclusion test.
inline constexpr double kRankTolerance = 1e-8;
/// Smallest branch probability accepted for a state update.
inline constexpr double kBranchTolerance = 1e-12;

double max_abs(const ComplexMatrix& m);

class DensityOperator {
 public:
  /// Checks finiteness, Hermiticity, positivity (min eigenvalue ≥ -1e-9) and
  /// unit trace; throws InvalidOperator.
  static DensityOperator create(ComplexMatrix m);
  /// |ψ⟩⟨ψ| for the normalized ψ.
  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class Projector {
 public:
  /// Checks finiteness, Hermiticity and idempotence; throws InvalidOperator.
  static Projector create(ComplexMatrix m);
  /// Projector onto span{v}.
  static Projector onto(const ComplexVector& v);
  static Projector zero(Eigen::Index dim);
  static Projector identity(Eigen::Index dim);
  /// Qubit projector (I + n·σ)/2 for a unit Bloch vector n.
  static Projector bloch(double nx, double ny, double nz);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  Eigen::Index rank() const;

 private:
  explicit Projector(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Tr[ρP], snapped onto [0, 1] when within tolerance of the boundary.
double born(const DensityOperator& rho, const Projector& p);

/// τ_P(ρ) = PρP / Tr[ρP]. Throws ZeroProbabilityBranch when Tr[ρP] ≤ 1e-12.
DensityOperator lueders(const DensityOperator& rho, const Projector& p);

/// range(P) ⊆ range(Q), i.e. ‖QP − P‖_max ≤ 1e-8.
bool projector_leq(const Projector& p, const Projector& q);

/// Projector onto range(P) ∩ range(Q): null space of (I−P) + (I−Q).
Projector proj_meet(const Projector& p, const Projector& q);
/// Projector onto range(P) + range(Q), via De Morgan.
Projector proj_join(const Projector& p, const Projector& q);
Projector proj_ortho(const Projector& p);

/// [P, Q] = 0 within 1e-9.
bool kappa_compatible(const Projector& p, const Projector& q);

/// Tr[P_E P_F ρ P_F P_E] / Tr[P_F ρ P_F].
double quantum_conditional_trace(const DensityOperator& rho, const Projector& e,
                                 const Projector& f);
/// born(lueders(ρ, P_F), P_E).
double quantum_conditional_sequential(const DensityOperator& rho, const Projector& e,
                                      const Projector& f);
/// Probability of E after a first-kind measurement of F with outcome yes.
/// Computes both routes and throws PostconditionViolated if they disagree by
/// more than 1e-9. Throws ZeroProbabilityBranch when Tr[P_F ρ P_F] ≤ 1e-12.
double quantum_conditional(const DensityOperator& rho, const Projector& e, const Projector& f);

/// Named qubit presets: z+, z-, x+, x-, y+, y- (both kinds), plus
/// maximally-mixed (states) and zero / identity (projectors).
DensityOperator preset_state(const std::string& name);
Projector preset_projector(const std::string& name);

class QuantumModel {
 public:
  explicit QuantumModel(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return dim_; }
  /// Throws DimensionMismatch, or InvalidOperator on duplicate ids.
  void add_state(StateId id, DensityOperator rho);
  void add_property(PropertyId id, Projector p);

  const std::vector<std::pair<StateId, DensityOperator>>& states() const noexcept {
    return states_;
  }
  const std::vector<std::pair<PropertyId, Projector>>& properties() const noexcept {
    return properties_;
  }
  /// Throw UnknownState / UnknownProperty.
  const DensityOperator& state(const StateId& id) const;
  const Projector& property(const PropertyId& id) const;

 private:
  Eigen::Index dim_;
  std::vector<std::pair<StateId, DensityOperator>> states_;
  std::vector<std::pair<PropertyId, Projector>> properties_;
};

std::vector<DensityOperator> haar_random_pure_states(Eigen::Index dim, std::size_t count,
                                                     std::mt19937_64& rng);

/// Eigenvector pure states of every projector in the model, the maximally
/// mixed state, and `random_count` seeded Haar-random pure states.
std::vector<DensityOperator> default_state_sample(const QuantumModel& model,
                                                  std::uint64_t seed,
                                                  std::size_t random_count = 32);

struct OrderingCounterexample {
  PropertyId lhs;
  PropertyId rhs;
  bool born_order;      // ∀ sampled S: Tr[ρ_S P] ≤ Tr[ρ_S Q]
  bool projector_order; // P ≪ Q
  /// Index into the state sample that separates the pair, if any.
  std::optional<std::size_t> separating_state;
};

struct OrderingFamilyReport {
  bool passed = true;
  /// Set when the sample is too small to span the state space (fewer than
  /// dim² states), so a born-order agreement may be a false positive.
  bool low_confidence = false;
  std::size_t pairs_checked = 0;
  std::size_t states_used = 0;
  std::vector<OrderingCounterexample> counterexamples;
};

/// Compares the order induced by the Born probabilities on the sample with ≪
/// for every ordered pair of model properties.
OrderingFamilyReport ordering_family_check(const QuantumModel& model,
                                           const std::vector<DensityOperator>& state_sample);

/// Table-driven lattice generated by the model's projectors under meet, join
/// and ortho. Generated elements get names like "meet(a,b)".
struct ProjectorLattice {
  OrthoLattice lattice;
  std::vector<Projector> projectors;  // parallel to lattice.elements()
};

/// Throws InvalidLattice if the closure exceeds `max_elements`.
ProjectorLattice generate_projector_lattice(const QuantumModel& model,
                                            std::size_t max_elements = 64);

/// Q_S(E) = Tr[ρ_S P_E] for every model state and lattice element.
FloatFamily born_family(const QuantumModel& model, const ProjectorLattice& lattice);

/// Lüders-backed first-kind maps: for each lattice element F and each state S
/// with Tr[ρ_S P_F] > 1e-12, t_F(S) is the registered state equal to τ_F(ρ_S)
/// within 1e-9. States whose image is not registered are left out.
std::map<PropertyId, FirstKindMap> lueders_first_kind_maps(const QuantumModel& model,
                                                           const ProjectorLattice& lattice);

}  // namespace ctxprob
