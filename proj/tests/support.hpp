// Shared generators and brute-force oracles for the test suites. The oracles
// deliberately avoid the library's own evaluation paths.
#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctxprob/embed.hpp"
#include "ctxprob/measurement.hpp"
#include "ctxprob/model.hpp"
#include "ctxprob/mu_prob.hpp"
#include "ctxprob/prob_space.hpp"
#include "ctxprob/quantum.hpp"

namespace support {

using ctxprob::Rational;

inline std::vector<std::string> point_labels(std::size_t n, const std::string& prefix = "u") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random rational weights over n points; some points get weight zero when
/// `allow_zero` is set.
inline std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t n,
                                            bool allow_zero = true) {
  std::uniform_int_distribution<int> num(allow_zero ? 0 : 1, 12);
  std::vector<long long> raw(n);
  long long total = 0;
  for (auto& r : raw) {
    r = num(rng);
    total += r;
  }
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  std::vector<Rational> out;
  for (auto r : raw) out.emplace_back(r, total);
  return out;
}

inline ctxprob::FiniteProbabilitySpace random_space(std::mt19937_64& rng, std::size_t max_points,
                                                    bool allow_zero = true) {
  std::uniform_int_distribution<std::size_t> size(1, max_points);
  const auto n = size(rng);
  return ctxprob::FiniteProbabilitySpace::create(point_labels(n), random_weights(rng, n, allow_zero));
}

inline std::vector<bool> random_mask(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<bool> mask(n);
  for (std::size_t i = 0; i < n; ++i) mask[i] = coin(rng);
  return mask;
}

inline ctxprob::Event mask_event(const std::vector<bool>& mask) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) members.push_back(i);
  }
  return ctxprob::Event(members);
}

/// Σ of weights over the points selected by `mask`.
inline Rational oracle_measure(const std::vector<Rational>& weights, const std::vector<bool>& mask) {
  Rational total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (mask[i]) total += weights[i];
  }
  return total;
}

/// Truth of f at one universe point, by walking the tree and scanning raw
/// extension lists.
inline bool holds_at(const ctxprob::Model& model, const ctxprob::Formula& f, std::size_t point) {
  using K = ctxprob::Formula::Kind;
  switch (f.kind()) {
    case K::kAtom: {
      const auto& members = model.ext(f.predicate()).members();
      return std::find(members.begin(), members.end(), point) != members.end();
    }
    case K::kNot:
      return !holds_at(model, f.operand(), point);
    case K::kAnd:
      return holds_at(model, f.lhs(), point) && holds_at(model, f.rhs(), point);
    case K::kOr:
      return holds_at(model, f.lhs(), point) || holds_at(model, f.rhs(), point);
  }
  return false;
}

inline std::vector<bool> oracle_extension(const ctxprob::Model& model, const ctxprob::Formula& f) {
  std::vector<bool> mask(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) mask[i] = holds_at(model, f, i);
  return mask;
}

/// Predicates used by the random models: two states and two properties in
/// two contexts each.
inline std::vector<ctxprob::PredicateId> standard_atoms(std::size_t count) {
  const std::vector<ctxprob::PredicateId> all = {
      ctxprob::StateId{"s0"},
      ctxprob::PropertyInContext{ctxprob::PropertyId{"E"}, ctxprob::ContextId{"c1"}},
      ctxprob::StateId{"s1"},
      ctxprob::PropertyInContext{ctxprob::PropertyId{"E"}, ctxprob::ContextId{"c2"}},
      ctxprob::PropertyInContext{ctxprob::PropertyId{"F"}, ctxprob::ContextId{"c1"}},
      ctxprob::PropertyInContext{ctxprob::PropertyId{"F"}, ctxprob::ContextId{"c2"}},
  };
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(count, all.size()))};
}

/// Random model over n points whose atoms get pairwise distinct random
/// extensions (n ≥ 3 keeps that feasible for up to six atoms).
inline ctxprob::Model random_model(std::mt19937_64& rng, std::size_t n,
                                   const std::vector<ctxprob::PredicateId>& atoms) {
  std::set<std::vector<bool>> used;
  std::vector<std::pair<ctxprob::PredicateId, ctxprob::Event>> ext;
  for (const auto& a : atoms) {
    std::vector<bool> mask;
    do {
      mask = random_mask(rng, n);
    } while (used.count(mask) != 0);
    used.insert(mask);
    ext.emplace_back(a, mask_event(mask));
  }
  return ctxprob::Model::create(point_labels(n), std::move(ext));
}

inline ctxprob::MuContextualStructure random_structure(std::mt19937_64& rng, std::size_t n,
                                                       const std::vector<ctxprob::PredicateId>& atoms) {
  auto model = random_model(rng, n, atoms);
  auto xi = ctxprob::FiniteProbabilitySpace::create(point_labels(n), random_weights(rng, n));
  return ctxprob::MuContextualStructure(std::move(model), std::move(xi));
}

// Quantum oracles: plain index loops instead of Eigen expressions.

inline double oracle_trace_product(const ctxprob::ComplexMatrix& a, const ctxprob::ComplexMatrix& b) {
  std::complex<double> total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) total += a(i, j) * b(j, i);
  }
  return total.real();
}

inline ctxprob::ComplexMatrix oracle_product(const ctxprob::ComplexMatrix& a,
                                             const ctxprob::ComplexMatrix& b) {
  ctxprob::ComplexMatrix out = ctxprob::ComplexMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    }
  }
  return out;
}

inline ctxprob::ComplexVector random_unit_vector(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ctxprob::ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

/// Random mixed state: a convex mix of up to `dim` random pure states.
inline ctxprob::DensityOperator random_density(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  ctxprob::ComplexMatrix m = ctxprob::ComplexMatrix::Zero(dim, dim);
  double total = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double w = u(rng);
    const auto v = random_unit_vector(rng, dim);
    m += w * v * v.adjoint();
    total += w;
  }
  m /= total;
  return ctxprob::DensityOperator::create(m);
}

/// Random projector of the given rank, from a Gram–Schmidt basis.
inline ctxprob::Projector random_projector(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index rank) {
  ctxprob::ComplexMatrix basis(dim, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    ctxprob::ComplexVector v = random_unit_vector(rng, dim);
    for (Eigen::Index j = 0; j < k; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(k) = v / v.norm();
  }
  return ctxprob::Projector::create(basis * basis.adjoint());
}

/// Qubit fixture: states z+, z-, x+; properties z+, x+.
inline ctxprob::QuantumModel qubit_fixture() {
  ctxprob::QuantumModel m(2);
  for (const char* s : {"z+", "z-", "x+"}) m.add_state({s}, ctxprob::preset_state(s));
  for (const char* p : {"z+", "x+"}) m.add_property({p}, ctxprob::preset_projector(p));
  return m;
}

}  // namespace support
