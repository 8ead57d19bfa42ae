#include "ctxprob/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ctxprob/errors.hpp"

namespace ctxprob {
namespace {

using Complex = std::complex<double>;
using HermitianSolver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>;

void check_shape(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidOperator(std::string(what) + " must be a nonempty square matrix");
  }
  if (m.rows() > kMaxDimension) {
    throw InvalidOperator(std::string(what) + " dimension exceeds 8");
  }
  if (!m.allFinite()) throw InvalidOperator(std::string(what) + " has non-finite entries");
  if (max_abs(m - m.adjoint()) > kOperatorTolerance) {
    throw InvalidOperator(std::string(what) + " is not Hermitian");
  }
}

void same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw DimensionMismatch("dimension " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

double clamp_probability(double p) {
  if (p < 0.0 && p >= -kOperatorTolerance) return 0.0;
  if (p > 1.0 && p <= 1.0 + kOperatorTolerance) return 1.0;
  return p;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

DensityOperator DensityOperator::create(ComplexMatrix m) {
  check_shape(m, "density operator");
  m = hermitize(m);
  HermitianSolver solver(m, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kOperatorTolerance) {
    throw InvalidOperator("density operator is not positive semidefinite");
  }
  if (std::abs(m.trace() - Complex(1.0, 0.0)) > kOperatorTolerance) {
    throw InvalidOperator("density operator trace is not 1");
  }
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidOperator("pure state vector must be nonzero");
  ComplexVector v = psi / norm;
  return create(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return create(identity(dim) / static_cast<double>(dim));
}

Projector Projector::create(ComplexMatrix m) {
  check_shape(m, "projector");
  m = hermitize(m);
  if (max_abs(m * m - m) > kOperatorTolerance) throw InvalidOperator("projector is not idempotent");
  return Projector(std::move(m));
}

Projector Projector::onto(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw InvalidOperator("projector direction must be nonzero");
  ComplexVector u = v / norm;
  return create(u * u.adjoint());
}

Projector Projector::zero(Eigen::Index dim) {
  return create(ComplexMatrix::Zero(dim, dim));
}

Projector Projector::identity(Eigen::Index dim) { return create(ctxprob::identity(dim)); }

Projector Projector::bloch(double nx, double ny, double nz) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(len - 1.0) > kOperatorTolerance) {
    throw InvalidOperator("Bloch vector must have unit length");
  }
  ComplexMatrix m(2, 2);
  m << Complex(1 + nz, 0), Complex(nx, -ny), Complex(nx, ny), Complex(1 - nz, 0);
  return create(m / 2.0);
}

Eigen::Index Projector::rank() const {
  return static_cast<Eigen::Index>(std::llround(m_.trace().real()));
}

double born(const DensityOperator& rho, const Projector& p) {
  same_dim(rho.dim(), p.dim());
  return clamp_probability((rho.matrix() * p.matrix()).trace().real());
}

DensityOperator lueders(const DensityOperator& rho, const Projector& p) {
  const double prob = born(rho, p);
  if (prob <= kBranchTolerance) {
    throw ZeroProbabilityBranch("Lueders update on a zero-probability outcome");
  }
  return DensityOperator::create(p.matrix() * rho.matrix() * p.matrix() / prob);
}

bool projector_leq(const Projector& p, const Projector& q) {
  same_dim(p.dim(), q.dim());
  return max_abs(q.matrix() * p.matrix() - p.matrix()) <= kRankTolerance;
}

Projector proj_meet(const Projector& p, const Projector& q) {
  same_dim(p.dim(), q.dim());
  const auto dim = p.dim();
  ComplexMatrix sum = (identity(dim) - p.matrix()) + (identity(dim) - q.matrix());
  HermitianSolver solver(hermitize(sum));
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (std::abs(solver.eigenvalues()(i)) <= kRankTolerance) {
      ComplexVector v = solver.eigenvectors().col(i);
      out += v * v.adjoint();
    }
  }
  return Projector::create(std::move(out));
}

Projector proj_ortho(const Projector& p) {
  return Projector::create(identity(p.dim()) - p.matrix());
}

Projector proj_join(const Projector& p, const Projector& q) {
  return proj_ortho(proj_meet(proj_ortho(p), proj_ortho(q)));
}

bool kappa_compatible(const Projector& p, const Projector& q) {
  same_dim(p.dim(), q.dim());
  return max_abs(p.matrix() * q.matrix() - q.matrix() * p.matrix()) <= kOperatorTolerance;
}

double quantum_conditional_trace(const DensityOperator& rho, const Projector& e,
                                 const Projector& f) {
  same_dim(rho.dim(), e.dim());
  same_dim(rho.dim(), f.dim());
  const ComplexMatrix branch = f.matrix() * rho.matrix() * f.matrix();
  const double denom = branch.trace().real();
  if (denom <= kBranchTolerance) {
    throw ZeroProbabilityBranch("conditioning outcome has probability 0");
  }
  const double num = (e.matrix() * branch * e.matrix()).trace().real();
  return clamp_probability(num / denom);
}

double quantum_conditional_sequential(const DensityOperator& rho, const Projector& e,
                                      const Projector& f) {
  same_dim(rho.dim(), e.dim());
  return born(lueders(rho, f), e);
}

double quantum_conditional(const DensityOperator& rho, const Projector& e, const Projector& f) {
  const double via_trace = quantum_conditional_trace(rho, e, f);
  const double via_update = quantum_conditional_sequential(rho, e, f);
  if (std::abs(via_trace - via_update) > kOperatorTolerance) {
    throw PostconditionViolated("trace and Lueders routes disagree on the conditional");
  }
  return via_trace;
}

namespace {

ComplexVector qubit_direction(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector v(2);
  if (name == "z+") {
    v << 1, 0;
  } else if (name == "z-") {
    v << 0, 1;
  } else if (name == "x+") {
    v << s, s;
  } else if (name == "x-") {
    v << s, -s;
  } else if (name == "y+") {
    v << Complex(s, 0), Complex(0, s);
  } else if (name == "y-") {
    v << Complex(s, 0), Complex(0, -s);
  } else {
    throw UnknownState("unknown preset '" + name + "'");
  }
  return v;
}

}  // namespace

DensityOperator preset_state(const std::string& name) {
  if (name == "maximally-mixed") return DensityOperator::maximally_mixed(2);
  return DensityOperator::pure(qubit_direction(name));
}

Projector preset_projector(const std::string& name) {
  if (name == "zero") return Projector::zero(2);
  if (name == "identity") return Projector::identity(2);
  try {
    return Projector::onto(qubit_direction(name));
  } catch (const UnknownState&) {
    throw UnknownProperty("unknown preset '" + name + "'");
  }
}

QuantumModel::QuantumModel(Eigen::Index dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDimension) throw DimensionMismatch("dimension must be in 1..8");
}

void QuantumModel::add_state(StateId id, DensityOperator rho) {
  same_dim(dim_, rho.dim());
  for (const auto& [sid, _] : states_) {
    if (sid == id) throw InvalidOperator("duplicate state " + id.name);
  }
  states_.emplace_back(std::move(id), std::move(rho));
}

void QuantumModel::add_property(PropertyId id, Projector p) {
  same_dim(dim_, p.dim());
  for (const auto& [pid, _] : properties_) {
    if (pid == id) throw InvalidOperator("duplicate property " + id.name);
  }
  properties_.emplace_back(std::move(id), std::move(p));
}

const DensityOperator& QuantumModel::state(const StateId& id) const {
  for (const auto& [sid, rho] : states_) {
    if (sid == id) return rho;
  }
  throw UnknownState("unknown state " + id.name);
}

const Projector& QuantumModel::property(const PropertyId& id) const {
  for (const auto& [pid, p] : properties_) {
    if (pid == id) return p;
  }
  throw UnknownProperty("unknown property " + id.name);
}

std::vector<DensityOperator> haar_random_pure_states(Eigen::Index dim, std::size_t count,
                                                     std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<DensityOperator> out;
  out.reserve(count);
  while (out.size() < count) {
    ComplexVector psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      psi(i) = Complex(re, im);
    }
    if (psi.norm() > 1e-6) out.push_back(DensityOperator::pure(psi));
  }
  return out;
}

std::vector<DensityOperator> default_state_sample(const QuantumModel& model, std::uint64_t seed,
                                                  std::size_t random_count) {
  std::vector<DensityOperator> out;
  for (const auto& [_, p] : model.properties()) {
    HermitianSolver solver(p.matrix());
    for (Eigen::Index i = 0; i < model.dim(); ++i) {
      out.push_back(DensityOperator::pure(solver.eigenvectors().col(i)));
    }
  }
  out.push_back(DensityOperator::maximally_mixed(model.dim()));
  std::mt19937_64 rng(seed);
  auto random = haar_random_pure_states(model.dim(), random_count, rng);
  out.insert(out.end(), random.begin(), random.end());
  return out;
}

OrderingFamilyReport ordering_family_check(const QuantumModel& model,
                                           const std::vector<DensityOperator>& sample) {
  OrderingFamilyReport report;
  report.states_used = sample.size();
  report.low_confidence =
      sample.size() < static_cast<std::size_t>(model.dim() * model.dim());
  const auto& props = model.properties();
  for (std::size_t a = 0; a < props.size(); ++a) {
    for (std::size_t b = 0; b < props.size(); ++b) {
      if (a == b) continue;
      ++report.pairs_checked;
      const auto& p = props[a].second;
      const auto& q = props[b].second;
      std::optional<std::size_t> separating;
      for (std::size_t s = 0; s < sample.size() && !separating; ++s) {
        if (born(sample[s], p) > born(sample[s], q) + kOperatorTolerance) separating = s;
      }
      const bool born_order = !separating.has_value();
      const bool proj_order = projector_leq(p, q);
      if (born_order != proj_order) {
        report.passed = false;
        report.counterexamples.push_back(
            {props[a].first, props[b].first, born_order, proj_order, separating});
      }
    }
  }
  return report;
}

ProjectorLattice generate_projector_lattice(const QuantumModel& model,
                                            std::size_t max_elements) {
  std::vector<PropertyId> names;
  std::vector<Projector> projs;
  auto find = [&](const Projector& p) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < projs.size(); ++i) {
      if (max_abs(projs[i].matrix() - p.matrix()) <= kOperatorTolerance) return i;
    }
    return std::nullopt;
  };
  auto offer = [&](PropertyId name, Projector p) {
    if (find(p)) return;
    if (projs.size() >= max_elements) {
      throw InvalidLattice("projector lattice closure exceeds " + std::to_string(max_elements) +
                           " elements");
    }
    names.push_back(std::move(name));
    projs.push_back(std::move(p));
  };
  for (const auto& [id, p] : model.properties()) {
    if (auto existing = find(p)) {
      throw InvalidLattice("properties " + id.name + " and " + names[*existing].name +
                           " have the same projector");
    }
    offer(id, p);
  }
  std::size_t processed = 0;
  while (processed < projs.size()) {
    const std::size_t limit = projs.size();
    for (std::size_t i = processed; i < limit; ++i) {
      offer(PropertyId{"perp(" + names[i].name + ")"}, proj_ortho(projs[i]));
      for (std::size_t j = 0; j < i; ++j) {
        offer(PropertyId{"meet(" + names[j].name + "," + names[i].name + ")"},
              proj_meet(projs[j], projs[i]));
        offer(PropertyId{"join(" + names[j].name + "," + names[i].name + ")"},
              proj_join(projs[j], projs[i]));
      }
    }
    processed = limit;
  }

  const auto n = projs.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  std::vector<std::size_t> ortho(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) leq[i][j] = projector_leq(projs[i], projs[j]);
    ortho[i] = find(proj_ortho(projs[i])).value();
  }
  auto lattice = OrthoLattice::from_order(names, std::move(leq), std::move(ortho));
  return ProjectorLattice{std::move(lattice), std::move(projs)};
}

FloatFamily born_family(const QuantumModel& model, const ProjectorLattice& lattice) {
  FloatFamily family;
  for (const auto& [sid, rho] : model.states()) {
    for (std::size_t i = 0; i < lattice.projectors.size(); ++i) {
      family.set(sid, lattice.lattice.element(i), born(rho, lattice.projectors[i]));
    }
  }
  return family;
}

std::map<PropertyId, FirstKindMap> lueders_first_kind_maps(const QuantumModel& model,
                                                           const ProjectorLattice& lattice) {
  std::map<PropertyId, FirstKindMap> maps;
  for (std::size_t i = 0; i < lattice.projectors.size(); ++i) {
    FirstKindMap t;
    for (const auto& [sid, rho] : model.states()) {
      if (born(rho, lattice.projectors[i]) <= kBranchTolerance) continue;
      const DensityOperator updated = lueders(rho, lattice.projectors[i]);
      for (const auto& [candidate, sigma] : model.states()) {
        if (max_abs(sigma.matrix() - updated.matrix()) <= kOperatorTolerance) {
          t.emplace(sid, candidate);
          break;
        }
      }
    }
    maps.emplace(lattice.lattice.element(i), std::move(t));
  }
  return maps;
}

}  // namespace ctxprob
