#include <doctest.h>

#include <cmath>

#include "ctxprob/embed.hpp"
#include "support.hpp"

using namespace ctxprob;

namespace {

PropertyId pid(const char* n) { return PropertyId{n}; }
StateId sid(const char* n) { return StateId{n}; }

EmbeddingScheme scheme(SchemeKind kind, std::size_t n, std::size_t r) { return {kind, n, r}; }

const std::vector<std::vector<PropertyId>> kSplit = {{pid("z+")}, {pid("x+")}};

// Single-state target whose z+ probability is 3/4.
QuantumModel three_quarters() {
  QuantumModel m(2);
  ComplexVector psi(2);
  psi << std::sqrt(3.0) / 2.0, 0.5;
  m.add_state(sid("t"), DensityOperator::pure(psi));
  m.add_property(pid("z+"), preset_projector("z+"));
  return m;
}

std::vector<Rational> per_context(const Embedding& e, const StateId& s, const PropertyId& p) {
  const auto& procs = e.registry.procedures_for(p);
  const auto& m = e.registry.procedure(procs.front());
  std::vector<Rational> out;
  for (const auto& c : m.context_ids()) {
    out.push_back(mu_conditional(e.structure, Formula::atom(PropertyInContext{p, c}),
                                 Formula::atom(s)));
  }
  return out;
}

}  // namespace

TEST_CASE("ontic scheme is exact for representable Born values") {
  const auto e = build_embedding(support::qubit_fixture(), kSplit, scheme(SchemeKind::kOntic, 1, 2));
  CHECK(property_probability(e.structure, e.registry, sid("z+"), pid("x+")) == Rational(1, 2));
  CHECK(e.approximations.empty());
  const auto r = verify_embedding(e, 0);
  CHECK(r.passed);
  CHECK(r.max_deviation == 0);
  CHECK(r.rows.size() == 6);
}

TEST_CASE("deterministic-context scheme") {
  SUBCASE("N times Born integral is exact") {
    const auto e = build_embedding(support::qubit_fixture(), kSplit,
                                   scheme(SchemeKind::kDeterministicContext, 4, 1));
    CHECK(property_probability(e.structure, e.registry, sid("z+"), pid("x+")) == Rational(1, 2));
    const auto v = per_context(e, sid("z+"), pid("x+"));
    CHECK(v == std::vector<Rational>{1, 1, 0, 0});
  }
  SUBCASE("Born 3/4 with N=10 stays within 1/20") {
    const auto e = build_embedding(three_quarters(), {{pid("z+")}},
                                   scheme(SchemeKind::kDeterministicContext, 10, 1));
    const auto p = property_probability(e.structure, e.registry, sid("t"), pid("z+"));
    CHECK(p == Rational(4, 5));
    CHECK(abs(p - Rational(3, 4)) <= Rational(1, 20));
    const auto r = verify_embedding(e, Rational(1, 20));
    CHECK(r.passed);
    CHECK(r.max_deviation == Rational(1, 20));
    CHECK_FALSE(verify_embedding(e, Rational(1, 21)).passed);
  }
}

TEST_CASE("per-context conditionals by scheme") {
  const auto target = support::qubit_fixture();
  SUBCASE("deterministic-context values are 0 or 1") {
    const auto e = build_embedding(target, kSplit, scheme(SchemeKind::kDeterministicContext, 6, 2));
    for (const auto& [s, _] : target.states()) {
      for (const auto& [p, __] : target.properties()) {
        for (const auto& v : per_context(e, s, p)) CHECK((v == 0 || v == 1));
      }
    }
  }
  SUBCASE("ontic values do not depend on the context") {
    const auto e = build_embedding(target, kSplit, scheme(SchemeKind::kOntic, 5, 4));
    for (const auto& [s, _] : target.states()) {
      for (const auto& [p, __] : target.properties()) {
        const auto v = per_context(e, s, p);
        for (const auto& x : v) CHECK(x == v.front());
        CHECK(v.front() == exact_born(born(target.state(s), target.property(p))));
      }
    }
  }
  SUBCASE("hybrid activates both sources of randomness") {
    const auto e = build_embedding(target, kSplit, scheme(SchemeKind::kHybrid, 4, 4));
    bool strictly_inside = false;
    bool varies = false;
    for (const auto& [s, _] : target.states()) {
      for (const auto& [p, __] : target.properties()) {
        const auto v = per_context(e, s, p);
        for (const auto& x : v) {
          strictly_inside = strictly_inside || (x > 0 && x < 1);
          varies = varies || x != v.front();
        }
      }
    }
    CHECK(strictly_inside);
    CHECK(varies);
    CHECK(verify_embedding(e, 0).passed);
  }
}

TEST_CASE("deterministic-context deviation bound tightens with N") {
  const auto target = three_quarters();
  Rational previous_bound = 1;
  for (std::size_t n = 1; n <= 24; ++n) {
    const Rational bound(1, 2 * static_cast<long long>(n));
    CHECK(bound < previous_bound);
    previous_bound = bound;
    const auto e = build_embedding(target, {{pid("z+")}}, scheme(SchemeKind::kDeterministicContext, n, 1));
    CHECK(verify_embedding(e, bound).passed);
  }
}

TEST_CASE("embedded probabilities are generalized measures on the target lattice") {
  QuantumModel m(2);
  for (const char* s : {"z+", "x+", "y+"}) m.add_state(sid(s), preset_state(s));
  for (const char* p : {"z+", "z-", "x+", "x-"}) m.add_property(pid(p), preset_projector(p));
  const auto lattice = generate_projector_lattice(m);
  for (auto kind : {SchemeKind::kOntic, SchemeKind::kDeterministicContext, SchemeKind::kHybrid}) {
    const auto e = build_embedding(m, {{pid("z+"), pid("z-")}, {pid("x+"), pid("x-")}},
                                   scheme(kind, 4, 4));
    const auto fam = property_probability_family(e.structure, e.registry, e.property_space());
    for (const auto& [s, _] : m.states()) {
      // Orthogonal pairs inside one procedure add up to the certain event.
      CHECK(fam.value(s, pid("z+")) + fam.value(s, pid("z-")) == 1);
      CHECK(fam.value(s, pid("x+")) + fam.value(s, pid("x-")) == 1);
    }
    CHECK(verify_embedding(e, 0).passed);
  }
  CHECK(lattice.lattice.size() == 6);
}

TEST_CASE("a corrupted state prior is reported by name") {
  const auto e = build_embedding(support::qubit_fixture(), kSplit, scheme(SchemeKind::kOntic, 1, 4));
  auto weights = e.structure.xi().weights();
  const auto& labels = e.structure.xi().labels();
  // Skew the z+ block: all of z+#4's weight moves to z+#1.
  const auto first = *e.structure.xi().index_of("z+#1");
  const auto last = *e.structure.xi().index_of("z+#4");
  weights[first] += weights[last];
  weights[last] = 0;
  Embedding bad = e;
  bad.structure = MuContextualStructure(e.structure.model(), FiniteProbabilitySpace::create(labels, weights));
  const auto r = verify_embedding(bad, 0);
  CHECK_FALSE(r.passed);
  bool named = false;
  for (const auto& row : r.rows) {
    if (row.state == sid("z+") && row.property == pid("x+")) {
      named = row.deviation != 0;
      CHECK(row.classical_mean == Rational(3, 4));
    }
  }
  CHECK(named);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front().find("z+") != std::string::npos);
}

TEST_CASE("shared properties keep procedures in agreement") {
  QuantumModel m(2);
  for (const char* s : {"z+", "x+"}) m.add_state(sid(s), preset_state(s));
  for (const char* p : {"z+", "z-", "x+"}) m.add_property(pid(p), preset_projector(p));
  const auto e = build_embedding(m, {{pid("z+"), pid("z-")}, {pid("z+")}, {pid("x+")}},
                                 scheme(SchemeKind::kDeterministicContext, 4, 2));
  CHECK(e.registry.procedures_for(pid("z+")).size() == 2);
  const auto r = check_procedure_independence(
      e.structure, e.registry, Formula::property("z+", "M1.c1"), Formula::state("x+"), 0);
  CHECK(r.passed);
  CHECK_FALSE(r.vacuous);
  CHECK(r.max_deviation == 0);
  CHECK(verify_embedding(e, 0).passed);
}

TEST_CASE("construction errors") {
  const auto target = support::qubit_fixture();
  CHECK_THROWS_AS(build_embedding(target, {{pid("z+"), pid("x+")}}, scheme(SchemeKind::kOntic, 1, 4)),
                  IncompatibleGroup);
  CHECK_THROWS_AS(build_embedding(target, {{pid("z+")}}, scheme(SchemeKind::kOntic, 1, 4)),
                  InvalidRegistry);
  CHECK_THROWS_AS(build_embedding(target, {{pid("z+")}, {pid("w")}}, scheme(SchemeKind::kOntic, 1, 4)),
                  UnknownProperty);

  // Born 3/4 is not a multiple of 1/2.
  EmbeddingOptions strict;
  strict.require_exact = true;
  CHECK_THROWS_AS(build_embedding(three_quarters(), {{pid("z+")}}, scheme(SchemeKind::kOntic, 1, 2), strict),
                  IrrationalBornValue);
  const auto loose = build_embedding(three_quarters(), {{pid("z+")}}, scheme(SchemeKind::kOntic, 1, 2));
  REQUIRE(loose.approximations.size() == 1);
  CHECK(loose.approximations[0].born == Rational(3, 4));
  CHECK(loose.approximations[0].bias_bound == Rational(1, 4));
  CHECK(abs(loose.approximations[0].realized - Rational(3, 4)) <= Rational(1, 4));
}

TEST_CASE("state weights shape the prior without changing conditionals") {
  EmbeddingOptions opts;
  opts.state_weights = {{sid("z+"), Rational(1, 2)}, {sid("z-"), Rational(1, 4)}, {sid("x+"), Rational(1, 4)}};
  const auto e = build_embedding(support::qubit_fixture(), kSplit, scheme(SchemeKind::kOntic, 2, 4), opts);
  CHECK(mu_absolute(e.structure, Formula::state("z+")) == Rational(1, 2));
  CHECK(verify_embedding(e, 0).passed);
  opts.state_weights[sid("x+")] = Rational(1, 2);
  CHECK_THROWS_AS(build_embedding(support::qubit_fixture(), kSplit, scheme(SchemeKind::kOntic, 2, 4), opts),
                  InvalidSpace);
}

TEST_CASE("scheme names") {
  for (auto k : {SchemeKind::kOntic, SchemeKind::kDeterministicContext, SchemeKind::kHybrid}) {
    CHECK(parse_scheme_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_scheme_kind("quantum"), std::invalid_argument);
}
