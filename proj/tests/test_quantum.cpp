#include <doctest.h>

#include <cmath>

#include "ctxprob/quantum.hpp"
#include "support.hpp"

using namespace ctxprob;

namespace {

Projector p0() { return preset_projector("z+"); }
Projector p1() { return preset_projector("z-"); }
Projector pplus() { return preset_projector("x+"); }
DensityOperator rho0() { return preset_state("z+"); }

bool same(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-9) {
  return max_abs(a - b) <= tol;
}

void check_density_invariants(const DensityOperator& rho) {
  const auto& m = rho.matrix();
  CHECK(max_abs(m - m.adjoint()) <= 1e-9);
  CHECK(std::abs(m.trace().real() - 1.0) <= 1e-9);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

}  // namespace

TEST_CASE("born examples") {
  CHECK(born(rho0(), p0()) == doctest::Approx(1.0));
  CHECK(born(rho0(), p1()) == doctest::Approx(0.0));
  CHECK(std::abs(born(rho0(), pplus()) - 0.5) <= 1e-9);
  CHECK_THROWS_AS(born(DensityOperator::maximally_mixed(3), p0()), DimensionMismatch);
}

TEST_CASE("operator validation") {
  ComplexMatrix not_hermitian(2, 2);
  not_hermitian << 0.5, 0.5, 0.0, 0.5;
  CHECK_THROWS_AS(DensityOperator::create(not_hermitian), InvalidOperator);
  ComplexMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityOperator::create(negative), InvalidOperator);
  ComplexMatrix trace_two = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator::create(trace_two), InvalidOperator);
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(Projector::create(half), InvalidOperator);
  CHECK_THROWS_AS(Projector::create(ComplexMatrix::Zero(2, 3)), InvalidOperator);
  CHECK_THROWS(DensityOperator::maximally_mixed(9));
  CHECK_THROWS(Projector::identity(0));
  CHECK_THROWS(QuantumModel(9));
  CHECK_THROWS_AS(preset_state("w+"), UnknownState);
  CHECK_THROWS_AS(preset_projector("w+"), UnknownProperty);
}

TEST_CASE("lueders examples") {
  CHECK(same(lueders(rho0(), p0()).matrix(), rho0().matrix()));
  CHECK(same(lueders(DensityOperator::maximally_mixed(2), p0()).matrix(), rho0().matrix()));
  CHECK_THROWS_AS(lueders(rho0(), p1()), ZeroProbabilityBranch);
}

TEST_CASE("projector order") {
  const auto zero = Projector::zero(2);
  const auto id = Projector::identity(2);
  for (const auto& p : {p0(), p1(), pplus(), zero, id}) {
    CHECK(projector_leq(p, id));
    CHECK(projector_leq(zero, p));
    CHECK(projector_leq(p, p));
  }
  CHECK_FALSE(projector_leq(p0(), pplus()));
  CHECK_FALSE(projector_leq(pplus(), p0()));
  CHECK_FALSE(projector_leq(id, p0()));
  CHECK_THROWS_AS(projector_leq(p0(), Projector::identity(3)), DimensionMismatch);
}

TEST_CASE("meet, join and ortho") {
  for (const auto& p : {p0(), pplus(), Projector::zero(2), Projector::identity(2)}) {
    CHECK(same(proj_meet(p, p).matrix(), p.matrix()));
    CHECK(same(proj_join(p, p).matrix(), p.matrix()));
    CHECK(same(proj_ortho(proj_ortho(p)).matrix(), p.matrix()));
  }
  CHECK(proj_meet(p0(), pplus()).rank() == 0);
  CHECK(proj_join(p0(), pplus()).rank() == 2);
  CHECK(same(proj_ortho(p0()).matrix(), p1().matrix()));
  CHECK_THROWS_AS(proj_meet(p0(), Projector::identity(3)), DimensionMismatch);

  // Higher dimension: two planes in C^3 meet in a line.
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1;
  a(1, 1) = 1;
  ComplexVector u(3), v(3);
  u << 1, 0, 0;
  v << 0, 1, 1;
  v /= v.norm();
  ComplexMatrix b = u * u.adjoint() + v * v.adjoint();
  const auto m = proj_meet(Projector::create(a), Projector::create(b));
  CHECK(m.rank() == 1);
  CHECK(same(m.matrix(), u * u.adjoint()));
}

TEST_CASE("kappa compatibility is not transitive") {
  const auto id = Projector::identity(2);
  CHECK(kappa_compatible(p0(), p0()));
  CHECK(kappa_compatible(p0(), id));
  CHECK(kappa_compatible(id, pplus()));
  CHECK_FALSE(kappa_compatible(p0(), pplus()));
  CHECK(kappa_compatible(p0(), p1()));
}

TEST_CASE("quantum conditional examples") {
  CHECK(quantum_conditional(rho0(), pplus(), pplus()) == doctest::Approx(1.0));
  CHECK(quantum_conditional(rho0(), p0(), pplus()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(quantum_conditional(rho0(), p0(), p1()), ZeroProbabilityBranch);
}

TEST_CASE("commuting diagonal fixtures match the classical ratio") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 7);
    const auto w = support::random_weights(rng, static_cast<std::size_t>(dim), false);
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) rho(i, i) = to_double(w[static_cast<std::size_t>(i)]);
    auto diag_projector = [&](const std::vector<bool>& mask) {
      ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) p(i, i) = mask[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      return Projector::create(p);
    };
    const auto me = support::random_mask(rng, static_cast<std::size_t>(dim));
    auto mf = support::random_mask(rng, static_cast<std::size_t>(dim));
    mf[0] = true;
    Rational num = 0, den = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
      if (mf[i]) den += w[i];
      if (mf[i] && me[i]) num += w[i];
    }
    const double ratio = to_double(num / den);
    const auto r = DensityOperator::create(rho);
    const auto e = diag_projector(me);
    const auto f = diag_projector(mf);
    CHECK(std::abs(quantum_conditional_trace(r, e, f) - ratio) <= 1e-12);
    CHECK(std::abs(quantum_conditional_sequential(r, e, f) - ratio) <= 1e-12);
    CHECK(kappa_compatible(e, f));
  }
}

TEST_CASE("born is linear in the state and additive over orthogonal projectors") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 5);
    const auto r1 = support::random_density(rng, dim);
    const auto r2 = support::random_density(rng, dim);
    const double t = unit(rng);
    const auto mix = DensityOperator::create(t * r1.matrix() + (1 - t) * r2.matrix());
    const auto p = support::random_projector(rng, dim, 1 + static_cast<Eigen::Index>(rng() % dim));

    CHECK(std::abs(born(r1, p) - support::oracle_trace_product(r1.matrix(), p.matrix())) <= 1e-9);
    CHECK(std::abs(born(mix, p) - (t * born(r1, p) + (1 - t) * born(r2, p))) <= 1e-9);
    CHECK(std::abs(born(r1, Projector::identity(dim)) - 1.0) <= 1e-9);

    // Split a random rank-2 projector into two orthogonal rank-1 parts.
    const auto whole = support::random_projector(rng, dim, 2);
    const auto v = support::random_unit_vector(rng, dim);
    ComplexVector inside = whole.matrix() * v;
    if (inside.norm() < 1e-6) continue;
    const auto part = Projector::onto(inside);
    const auto rest = Projector::create(whole.matrix() - part.matrix());
    CHECK(max_abs(part.matrix() * rest.matrix()) <= 1e-9);
    CHECK(std::abs(born(r1, whole) - born(r1, part) - born(r1, rest)) <= 1e-9);
  }
}

TEST_CASE("lueders output is a density operator and the update is idempotent") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 7);
    const auto rho = support::random_density(rng, dim);
    const auto p = support::random_projector(rng, dim, 1 + static_cast<Eigen::Index>(rng() % dim));
    const auto once = lueders(rho, p);
    check_density_invariants(once);
    CHECK(std::abs(born(once, p) - 1.0) <= 1e-9);
    CHECK(same(lueders(once, p).matrix(), once.matrix()));
    // Independent oracle for PρP / Tr[ρP].
    const ComplexMatrix prp = support::oracle_product(support::oracle_product(p.matrix(), rho.matrix()),
                                                      p.matrix());
    CHECK(same(once.matrix(), prp / support::oracle_trace_product(rho.matrix(), p.matrix())));
  }
}

TEST_CASE("the two conditional routes agree on random fixtures") {
  std::mt19937_64 rng(83);
  int compared = 0;
  for (int trial = 0; trial < 200 && compared < 100; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 4);
    const auto rho = support::random_density(rng, dim);
    const auto e = support::random_projector(rng, dim, 1 + static_cast<Eigen::Index>(rng() % dim));
    const auto f = support::random_projector(rng, dim, 1 + static_cast<Eigen::Index>(rng() % dim));
    if (born(rho, f) <= 1e-12) continue;
    ++compared;
    CHECK(std::abs(quantum_conditional_trace(rho, e, f) - quantum_conditional_sequential(rho, e, f)) <= 1e-9);
  }
  CHECK(compared == 100);
}

TEST_CASE("generated projector lattices satisfy the orthocomplement laws") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 2);
    QuantumModel m(dim);
    for (int k = 0; k < 2; ++k) {
      m.add_property(PropertyId{"p" + std::to_string(k)},
                     support::random_projector(rng, dim, 1));
    }
    const auto l = generate_projector_lattice(m);
    const auto r = verify_lattice_laws(l.lattice);
    CHECK(r.passed);
    for (std::size_t i = 0; i < l.lattice.size(); ++i) {
      for (std::size_t j = 0; j < l.lattice.size(); ++j) {
        CHECK(l.lattice.leq(i, j) == projector_leq(l.projectors[i], l.projectors[j]));
      }
    }
  }
  const auto qubit = generate_projector_lattice(support::qubit_fixture());
  CHECK(qubit.lattice.size() == 6);
  CHECK_FALSE(qubit.lattice.is_distributive());
  CHECK(qubit.lattice.is_orthomodular());
}

TEST_CASE("ordering family check") {
  SUBCASE("a chain agrees") {
    QuantumModel m(2);
    m.add_property({"0"}, Projector::zero(2));
    m.add_property({"z+"}, p0());
    m.add_property({"I"}, Projector::identity(2));
    const auto r = ordering_family_check(m, default_state_sample(m, 1));
    CHECK(r.passed);
    CHECK_FALSE(r.low_confidence);
    CHECK(r.pairs_checked == 6);
  }
  SUBCASE("an incomparable pair is separated in both directions") {
    QuantumModel m(2);
    m.add_property({"z+"}, p0());
    m.add_property({"x+"}, pplus());
    const auto sample = default_state_sample(m, 1);
    const auto r = ordering_family_check(m, sample);
    CHECK(r.passed);
    REQUIRE(r.counterexamples.empty());
    // Both eigenstates z+ and x+ are in the sample and separate the pair.
    bool z_over_x = false, x_over_z = false;
    for (const auto& s : sample) {
      z_over_x = z_over_x || born(s, p0()) > born(s, pplus()) + 1e-9;
      x_over_z = x_over_z || born(s, pplus()) > born(s, p0()) + 1e-9;
    }
    CHECK(z_over_x);
    CHECK(x_over_z);
  }
  SUBCASE("a single sampled state is flagged") {
    QuantumModel m(2);
    m.add_property({"z+"}, p0());
    m.add_property({"x+"}, pplus());
    const auto r = ordering_family_check(m, {preset_state("y+")});
    CHECK(r.low_confidence);
    // y+ gives both projectors 1/2, so Born order claims both directions.
    CHECK_FALSE(r.passed);
    REQUIRE_FALSE(r.counterexamples.empty());
    CHECK(r.counterexamples[0].born_order);
    CHECK_FALSE(r.counterexamples[0].projector_order);
  }
}

TEST_CASE("quantum model bookkeeping") {
  QuantumModel m(2);
  m.add_state({"a"}, rho0());
  CHECK_THROWS_AS(m.add_state({"a"}, rho0()), InvalidOperator);
  CHECK_THROWS_AS(m.add_state({"b"}, DensityOperator::maximally_mixed(3)), DimensionMismatch);
  CHECK_THROWS_AS(m.state({"zz"}), UnknownState);
  CHECK_THROWS_AS(m.property({"zz"}), UnknownProperty);
}
