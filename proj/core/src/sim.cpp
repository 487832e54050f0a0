#include "auxenc/sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "auxenc/rng.hpp"

namespace auxenc {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);
constexpr uint32_t kStateQubitCap = 26;
constexpr uint32_t kPrepQubitCap = 24;
constexpr uint32_t kJointQubitCap = 20;

std::complex<double> pow_i(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Bit masks of one Pauli string: the operator maps |x> to
// base * (-1)^{popcount(x & phase)} |x ^ flips>.
struct TermMasks {
  uint64_t flips = 0;
  uint64_t phase = 0;
  std::complex<double> base;
};

TermMasks make_masks(const PauliTerm& t, uint32_t n_qubits) {
  if (!t.letters.empty() && t.max_qubit() >= n_qubits) {
    throw std::runtime_error("pauli term acts outside the register");
  }
  TermMasks m;
  int n_y = 0;
  for (const auto& [q, p] : t.letters) {
    const uint64_t bit = uint64_t{1} << q;
    switch (p) {
      case Pauli::X:
        m.flips |= bit;
        break;
      case Pauli::Y:
        m.flips |= bit;
        m.phase |= bit;
        ++n_y;
        break;
      case Pauli::Z:
        m.phase |= bit;
        break;
    }
  }
  m.base = t.amplitude() * pow_i(n_y);
  return m;
}

double parity_sign(uint64_t bits) {
  return std::popcount(bits) % 2 == 0 ? 1.0 : -1.0;
}

void accumulate_term(const StateVector& in, const PauliTerm& t,
                     StateVector& out) {
  const TermMasks m = make_masks(t, in.n_qubits);
  const uint64_t dim = in.dim();
  for (uint64_t x = 0; x < dim; ++x) {
    out.amp[x ^ m.flips] += m.base * parity_sign(x & m.phase) * in.amp[x];
  }
}

std::vector<std::complex<double>> vec_alloc(uint64_t dim) {
  return std::vector<std::complex<double>>(dim, {0.0, 0.0});
}

double vec_norm(const std::vector<std::complex<double>>& v) {
  long double s = 0.0L;
  for (const auto& a : v) s += (long double)std::norm(a);
  return std::sqrt((double)s);
}

std::complex<double> vec_dot(const std::vector<std::complex<double>>& a,
                             const std::vector<std::complex<double>>& b) {
  std::complex<long double> s(0.0L, 0.0L);
  for (size_t k = 0; k < a.size(); ++k) {
    s += std::complex<long double>(std::conj(a[k])) *
         std::complex<long double>(b[k]);
  }
  return {(double)s.real(), (double)s.imag()};
}

// Dense matrix of a sum restricted to the listed qubits (ascending); every
// term must be supported on them.
Eigen::MatrixXcd dense_on_support(const PauliSum& h,
                                  const std::vector<uint32_t>& qubits) {
  const uint32_t k = static_cast<uint32_t>(qubits.size());
  const uint64_t dim = uint64_t{1} << k;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms) {
    PauliTerm local = t;
    for (auto& [q, p] : local.letters) {
      const auto it = std::lower_bound(qubits.begin(), qubits.end(), q);
      if (it == qubits.end() || *it != q) {
        throw std::runtime_error("term acts outside the given support");
      }
      q = static_cast<uint32_t>(it - qubits.begin());
    }
    const TermMasks tm = make_masks(local, k);
    for (uint64_t x = 0; x < dim; ++x) {
      m(x ^ tm.flips, x) += tm.base * parity_sign(x & tm.phase);
    }
  }
  return m;
}

void apply_dense_on_support(StateVector& psi, const Eigen::MatrixXcd& u,
                            const std::vector<uint32_t>& qubits) {
  const uint32_t k = static_cast<uint32_t>(qubits.size());
  const uint64_t dim_loc = uint64_t{1} << k;
  uint64_t smask = 0;
  std::vector<uint64_t> scatter(dim_loc, 0);
  for (uint32_t b = 0; b < k; ++b) smask |= uint64_t{1} << qubits[b];
  for (uint64_t j = 0; j < dim_loc; ++j) {
    uint64_t s = 0;
    for (uint32_t b = 0; b < k; ++b) {
      if ((j >> b) & 1) s |= uint64_t{1} << qubits[b];
    }
    scatter[j] = s;
  }
  Eigen::VectorXcd v(dim_loc);
  const uint64_t dim = psi.dim();
  for (uint64_t rest = 0; rest < dim; rest = ((rest | smask) + 1) & ~smask) {
    for (uint64_t j = 0; j < dim_loc; ++j) v(j) = psi.amp[rest | scatter[j]];
    v = u * v;
    for (uint64_t j = 0; j < dim_loc; ++j) psi.amp[rest | scatter[j]] = v(j);
  }
}

std::vector<uint32_t> full_support(uint32_t n) {
  std::vector<uint32_t> q(n);
  for (uint32_t i = 0; i < n; ++i) q[i] = i;
  return q;
}

bool all_terms_commute(const PauliSum& h) {
  for (size_t a = 0; a < h.terms.size(); ++a) {
    for (size_t b = a + 1; b < h.terms.size(); ++b) {
      if (!pauli_commute(h.terms[a], h.terms[b])) return false;
    }
  }
  return true;
}

double one_norm(const PauliSum& h) {
  double s = 0.0;
  for (const auto& t : h.terms) s += std::abs(t.amplitude());
  return s;
}

// One Lanczos sweep with full reorthogonalization; returns the Ritz pairs
// of the tridiagonal projection and the basis.
struct LanczosSweep {
  std::vector<std::vector<std::complex<double>>> basis;
  Eigen::VectorXd values;       // ascending Ritz values
  Eigen::MatrixXd vectors;      // tridiagonal eigenvectors, column-major
};

template <typename Apply>
LanczosSweep lanczos_sweep(const Apply& apply, uint64_t dim,
                           std::vector<std::complex<double>> start,
                           uint32_t m_max) {
  LanczosSweep out;
  const double nrm0 = vec_norm(start);
  if (nrm0 < 1e-150) throw std::runtime_error("lanczos start vector is zero");
  for (auto& a : start) a /= nrm0;
  out.basis.push_back(std::move(start));
  std::vector<double> alpha;
  std::vector<double> beta;
  for (uint32_t j = 0; j < m_max; ++j) {
    std::vector<std::complex<double>> w = vec_alloc(dim);
    apply(out.basis[j], w);
    alpha.push_back(vec_dot(out.basis[j], w).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : out.basis) {
        const std::complex<double> c = vec_dot(v, w);
        for (uint64_t k = 0; k < dim; ++k) w[k] -= c * v[k];
      }
    }
    const double b = vec_norm(w);
    if (j + 1 == m_max || out.basis.size() == dim || b < 1e-12) break;
    beta.push_back(b);
    for (auto& a : w) a /= b;
    out.basis.push_back(std::move(w));
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("lanczos tridiagonal solve failed");
  }
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

StateVector krylov_evolve(const PauliSum& h, double t, StateVector psi) {
  const uint64_t dim = psi.dim();
  const uint32_t nq = psi.n_qubits;
  const uint32_t m_max = nq <= 16 ? 48 : 20;
  const double scale = one_norm(h);
  const int n_sub =
      std::max(1, (int)std::ceil(std::abs(t) * scale * 6.0 / m_max));
  const double dt = t / n_sub;
  const auto apply = [&h, nq](const std::vector<std::complex<double>>& in,
                              std::vector<std::complex<double>>& out) {
    StateVector tmp;
    tmp.n_qubits = nq;
    tmp.amp = in;
    StateVector res = apply_pauli_sum(tmp, h);
    out = std::move(res.amp);
  };
  for (int s = 0; s < n_sub; ++s) {
    const double nrm = vec_norm(psi.amp);
    LanczosSweep sweep = lanczos_sweep(apply, dim, psi.amp, m_max);
    const auto m = sweep.values.size();
    // exp(-i dt T) e_1 through the Ritz decomposition of T.
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const std::complex<double> ph = std::exp(-kI * dt * sweep.values(a));
      for (Eigen::Index b = 0; b < m; ++b) {
        u(b) += sweep.vectors(b, a) * ph * sweep.vectors(0, a);
      }
    }
    std::vector<std::complex<double>> next = vec_alloc(dim);
    for (Eigen::Index b = 0; b < m; ++b) {
      const std::complex<double> c = u(b) * nrm;
      const auto& v = sweep.basis[b];
      for (uint64_t k = 0; k < dim; ++k) next[k] += c * v[k];
    }
    psi.amp = std::move(next);
  }
  return psi;
}

enum class Symmetry { Hermitian, AntiHermitian, Neither };

Symmetry classify(const PauliSum& op) {
  const PauliSum adj = sum_adjoint(op);
  if (approx_equal(adj, op, 1e-10)) return Symmetry::Hermitian;
  PauliSum neg = op;
  neg *= -1.0;
  if (approx_equal(adj, neg, 1e-10)) return Symmetry::AntiHermitian;
  return Symmetry::Neither;
}

PauliSum times_i(const PauliSum& op) {
  PauliSum out = op;
  for (auto& t : out.terms) t.phase_pow = (t.phase_pow + 1) % 4;
  out.canonicalize();
  return out;
}

double dense_spectral_norm(const PauliSum& op, uint32_t n_qubits,
                           Symmetry sym) {
  const auto qubits = full_support(n_qubits);
  if (sym == Symmetry::Neither) {
    const Eigen::MatrixXcd m = dense_on_support(op, qubits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("spectral norm solver failed");
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  const PauliSum herm = sym == Symmetry::Hermitian ? op : times_i(op);
  const Eigen::MatrixXcd m = dense_on_support(herm, qubits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral norm solver failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double lanczos_spectral_norm(const PauliSum& op, uint32_t n_qubits) {
  const uint64_t dim = uint64_t{1} << n_qubits;
  const PauliSum adj = sum_adjoint(op);
  const auto apply = [&](const std::vector<std::complex<double>>& in,
                         std::vector<std::complex<double>>& out) {
    StateVector tmp;
    tmp.n_qubits = n_qubits;
    tmp.amp = in;
    StateVector mid = apply_pauli_sum(tmp, op);
    StateVector res = apply_pauli_sum(mid, adj);
    out = std::move(res.amp);
  };
  Rng rng(0x5eed5eed5eed5eedULL);
  std::vector<std::complex<double>> start = vec_alloc(dim);
  for (auto& a : start) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  const uint32_t m_max = 40;
  LanczosSweep sweep = lanczos_sweep(apply, dim, std::move(start), m_max);
  // One restart from the current best Ritz vector sharpens the estimate.
  const auto top = sweep.values.size() - 1;
  std::vector<std::complex<double>> ritz = vec_alloc(dim);
  for (Eigen::Index b = 0; b < sweep.values.size(); ++b) {
    const double c = sweep.vectors(b, top);
    const auto& v = sweep.basis[b];
    for (uint64_t k = 0; k < dim; ++k) ritz[k] += c * v[k];
  }
  LanczosSweep second = lanczos_sweep(apply, dim, std::move(ritz), m_max);
  const double best =
      std::max(sweep.values(top), second.values(second.values.size() - 1));
  return std::sqrt(std::max(0.0, best));
}

PauliSum prep_factor(const ModeLayout& layout, const OrientedEdge& e,
                     std::complex<double> scale, int sign = +1) {
  PauliSum f;
  f.add_scaled(majorana_c(layout, e.tail, e.reg), scale);
  f.add_scaled(majorana_d(layout, e.head, e.reg), -kI * (double)sign * scale);
  f.canonicalize();
  return f;
}

void check_prep_args(const ModeLayout& layout, const StabilizerPlan& plan) {
  if (layout.total_qubits() > kPrepQubitCap) {
    throw std::runtime_error("preparation register too large");
  }
  if (layout.n_sites != plan.graph.n_vertices) {
    throw std::runtime_error("layout and plan disagree on site count");
  }
  if (plan.n_registers > layout.n_aux) {
    throw std::runtime_error("layout lacks auxiliary registers for the plan");
  }
}

PauliSum physical_term_image(const ModeLayout& layout, const FermionTerm& t) {
  switch (t.kind) {
    case TermKind::Hopping:
      return jw_hopping(layout, t.indices[0], t.indices[1], t.coeff);
    case TermKind::DensityDensity:
      return jw_density(layout, t.indices[0], t.indices[1], t.coeff);
    case TermKind::MajoranaQuartic:
      return jw_majorana_product(layout, t.indices, t.coeff);
    case TermKind::FourFermion:
    case TermKind::GeneralEven: {
      // FourFermion stores (i, j, k, l) with creations first; GeneralEven
      // flattens (i_r, j_r) pairs with creations at even slots.
      std::vector<uint32_t> create;
      std::vector<uint32_t> annihilate;
      const size_t n = t.indices.size() / 2;
      for (size_t r = 0; r < n; ++r) {
        if (t.kind == TermKind::FourFermion) {
          create.push_back(t.indices[r]);
          annihilate.push_back(t.indices[n + r]);
        } else {
          create.push_back(t.indices[2 * r]);
          annihilate.push_back(t.indices[2 * r + 1]);
        }
      }
      PauliSum prod(PauliTerm::identity());
      for (const uint32_t site : create) {
        prod = sum_mul(prod, creation_op(layout, site));
      }
      for (const uint32_t site : annihilate) {
        prod = sum_mul(prod, annihilation_op(layout, site));
      }
      PauliSum out = prod;
      out += sum_adjoint(prod);
      out *= t.coeff;
      out.canonicalize();
      return out;
    }
  }
  throw std::runtime_error("unknown term kind");
}

}  // namespace

StateVector StateVector::zero_state(uint32_t n) {
  if (n > kStateQubitCap) {
    throw std::runtime_error("state register too large");
  }
  StateVector s;
  s.n_qubits = n;
  s.amp = vec_alloc(uint64_t{1} << n);
  s.amp[0] = 1.0;
  return s;
}

double StateVector::norm() const { return vec_norm(amp); }

void StateVector::normalize() {
  const double n = norm();
  if (n < 1e-150) throw std::runtime_error("cannot normalize a zero state");
  for (auto& a : amp) a /= n;
}

std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits) {
    throw std::runtime_error("inner product register mismatch");
  }
  return vec_dot(a.amp, b.amp);
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::abs(inner(a, b));
}

void apply_pauli_term(StateVector& psi, const PauliTerm& t) {
  const TermMasks m = make_masks(t, psi.n_qubits);
  const uint64_t dim = psi.dim();
  if (m.flips == 0) {
    for (uint64_t x = 0; x < dim; ++x) {
      psi.amp[x] *= m.base * parity_sign(x & m.phase);
    }
    return;
  }
  for (uint64_t x = 0; x < dim; ++x) {
    const uint64_t y = x ^ m.flips;
    if (y < x) continue;
    const std::complex<double> ax = psi.amp[x];
    const std::complex<double> ay = psi.amp[y];
    psi.amp[y] = m.base * parity_sign(x & m.phase) * ax;
    psi.amp[x] = m.base * parity_sign(y & m.phase) * ay;
  }
}

StateVector apply_pauli_sum(const StateVector& psi, const PauliSum& op) {
  StateVector out;
  out.n_qubits = psi.n_qubits;
  out.amp = vec_alloc(psi.dim());
  for (const auto& t : op.terms) accumulate_term(psi, t, out);
  return out;
}

std::complex<double> expectation(const StateVector& psi, const PauliSum& op) {
  std::complex<long double> s(0.0L, 0.0L);
  for (const auto& t : op.terms) {
    const TermMasks m = make_masks(t, psi.n_qubits);
    const uint64_t dim = psi.dim();
    for (uint64_t x = 0; x < dim; ++x) {
      const std::complex<double> c = std::conj(psi.amp[x ^ m.flips]) * m.base *
                                     parity_sign(x & m.phase) * psi.amp[x];
      s += std::complex<long double>(c);
    }
  }
  return {(double)s.real(), (double)s.imag()};
}

std::complex<double> expectation(const StateVector& psi, const PauliTerm& t) {
  return expectation(psi, PauliSum(t));
}

void apply_exp_pauli_term(StateVector& psi, const PauliTerm& t, double theta) {
  if (!t.is_hermitian()) {
    throw std::runtime_error("exponential of a non-hermitian term");
  }
  const double a = t.coeff * (t.phase_pow == 2 ? -1.0 : 1.0);
  const double c = std::cos(theta * a);
  const std::complex<double> ms = -kI * std::sin(theta * a);
  PauliTerm bare = t;
  bare.coeff = 1.0;
  bare.phase_pow = 0;
  const TermMasks m = make_masks(bare, psi.n_qubits);
  const uint64_t dim = psi.dim();
  if (m.flips == 0) {
    for (uint64_t x = 0; x < dim; ++x) {
      psi.amp[x] *= c + ms * parity_sign(x & m.phase);
    }
    return;
  }
  for (uint64_t x = 0; x < dim; ++x) {
    const uint64_t y = x ^ m.flips;
    if (y < x) continue;
    const std::complex<double> ax = psi.amp[x];
    const std::complex<double> ay = psi.amp[y];
    psi.amp[x] = c * ax + ms * m.base * parity_sign(y & m.phase) * ay;
    psi.amp[y] = c * ay + ms * m.base * parity_sign(x & m.phase) * ax;
  }
}

void apply_exp_pauli_sum(StateVector& psi, const PauliSum& h, double theta,
                         uint32_t support_cap) {
  PauliSum work = h;
  work.canonicalize();
  if (work.terms.empty()) return;
  if (!work.is_hermitian(1e-10)) {
    throw std::runtime_error("exponential of a non-hermitian sum");
  }
  if (work.terms.size() == 1 || all_terms_commute(work)) {
    for (const auto& t : work.terms) apply_exp_pauli_term(psi, t, theta);
    return;
  }
  const std::vector<uint32_t> support = work.support();
  if (support.size() > support_cap) {
    throw std::runtime_error("term exponential support too large");
  }
  const Eigen::MatrixXcd m = dense_on_support(work, support);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("term exponential solver failed");
  }
  const Eigen::MatrixXcd u =
      es.eigenvectors() *
      (-kI * theta * es.eigenvalues().array()).exp().matrix().asDiagonal() *
      es.eigenvectors().adjoint();
  apply_dense_on_support(psi, u, support);
}

StateVector exact_evolve(const PauliSum& h, double t, const StateVector& psi,
                         uint32_t dense_cap) {
  PauliSum work = h;
  work.canonicalize();
  if (!work.is_hermitian(1e-10)) {
    throw std::runtime_error("evolution under a non-hermitian sum");
  }
  if (!work.terms.empty() && work.max_qubit() >= psi.n_qubits) {
    throw std::runtime_error("hamiltonian acts outside the register");
  }
  if (work.terms.empty()) return psi;
  if (psi.n_qubits <= dense_cap) {
    const auto qubits = full_support(psi.n_qubits);
    const Eigen::MatrixXcd m = dense_on_support(work, qubits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("evolution solver failed");
    }
    const Eigen::Map<const Eigen::VectorXcd> v(psi.amp.data(),
                                               (Eigen::Index)psi.dim());
    Eigen::VectorXcd w = es.eigenvectors().adjoint() * v;
    w.array() *= (-kI * t * es.eigenvalues().array()).exp();
    StateVector out;
    out.n_qubits = psi.n_qubits;
    out.amp.resize(psi.dim());
    Eigen::Map<Eigen::VectorXcd>(out.amp.data(), (Eigen::Index)psi.dim()) =
        es.eigenvectors() * w;
    return out;
  }
  if (psi.n_qubits > kJointQubitCap) {
    throw std::runtime_error("evolution register too large");
  }
  return krylov_evolve(work, t, psi);
}

double spectral_norm(const PauliSum& op, uint32_t n_qubits,
                     uint32_t dense_cap) {
  PauliSum work = op;
  work.canonicalize();
  if (work.terms.empty()) return 0.0;
  if (work.max_qubit() >= n_qubits) {
    throw std::runtime_error("operator acts outside the register");
  }
  if (n_qubits <= dense_cap) {
    return dense_spectral_norm(work, n_qubits, classify(work));
  }
  if (n_qubits > kJointQubitCap) {
    throw std::runtime_error("spectral norm register too large");
  }
  return lanczos_spectral_norm(work, n_qubits);
}

static PrepResult oracle_prep_core(const ModeLayout& layout,
                                   const StabilizerPlan& plan,
                                   const std::vector<int>* target) {
  check_prep_args(layout, plan);
  if (target) {
    if (target->size() != plan.edges.size()) {
      throw std::invalid_argument("target sign count does not match edges");
    }
    for (const int s : *target) {
      if (s != +1 && s != -1) {
        throw std::invalid_argument("target signs must be +1 or -1");
      }
    }
  }
  PrepResult r;
  r.state = StateVector::zero_state(layout.total_qubits());
  r.signs.assign(plan.edges.size(), +1);
  for (const auto& comp : plan.components) {
    const size_t count = comp.edge_order.size();
    for (size_t k = 0; k < count; ++k) {
      if (comp.is_cycle && k + 1 == count) continue;
      const uint32_t eidx = comp.edge_order[k];
      const OrientedEdge& e = plan.edges[eidx];
      const int sign = target ? (*target)[eidx] : +1;
      const PauliSum factor = prep_factor(layout, e, 1.0 / std::sqrt(2.0), sign);
      r.state = apply_pauli_sum(r.state, factor);
      if (r.state.norm() < 1e-8) {
        throw std::runtime_error("preparation factor annihilated the state");
      }
      r.state.normalize();
    }
  }
  if (target) {
    // A closing edge's eigenvalue is fixed by the factors already applied.
    // When it disagrees with the requested sign, c_tail anticommutes with
    // that stabilizer and commutes with every other one, so applying it
    // moves the state into the requested sector.
    for (const auto& comp : plan.components) {
      if (!comp.is_cycle) continue;
      const uint32_t eidx = comp.edge_order.back();
      const OrientedEdge& e = plan.edges[eidx];
      const PauliTerm p = stabilizer_term(layout, e);
      const std::complex<double> ev = expectation(r.state, p);
      const int lambda = ev.real() >= 0.0 ? +1 : -1;
      if (lambda != (*target)[eidx]) {
        StateVector flipped = r.state;
        apply_pauli_term(flipped, majorana_c(layout, e.tail, e.reg));
        r.state = flipped;
      }
    }
  }
  for (size_t eidx = 0; eidx < plan.edges.size(); ++eidx) {
    const PauliTerm p = stabilizer_term(layout, plan.edges[eidx]);
    const std::complex<double> ev = expectation(r.state, p);
    const int s = ev.real() >= 0.0 ? +1 : -1;
    if (std::abs(ev.real() - s) > 1e-8 || std::abs(ev.imag()) > 1e-9) {
      throw std::runtime_error("prepared stabilizer eigenvalue not definite");
    }
    r.signs[eidx] = s;
  }
  if (target && r.signs != *target) {
    throw std::runtime_error("targeted preparation missed the requested sector");
  }
  return r;
}

PrepResult prepare_aux_oracle(const ModeLayout& layout,
                              const StabilizerPlan& plan) {
  return oracle_prep_core(layout, plan, nullptr);
}

PrepResult prepare_aux_oracle(const ModeLayout& layout,
                              const StabilizerPlan& plan,
                              const std::vector<int>& target) {
  return oracle_prep_core(layout, plan, &target);
}

PrepResult prepare_aux_measured(const ModeLayout& layout,
                                const StabilizerPlan& plan, uint64_t seed) {
  check_prep_args(layout, plan);
  PrepResult r;
  r.state = StateVector::zero_state(layout.total_qubits());
  r.signs.assign(plan.edges.size(), +1);
  uint64_t block = 0;
  for (const auto& comp : plan.components) {
    for (const uint32_t eidx : comp.edge_order) {
      const OrientedEdge& e = plan.edges[eidx];
      Rng rng(Rng::mix(seed, block));
      ++block;
      const double u = rng.uniform();
      const StateVector cand = apply_pauli_sum(
          r.state, prep_factor(layout, e, 0.5));
      const double p0 = std::pow(cand.norm(), 2);
      int outcome;
      if (p0 < 1e-12) {
        outcome = 1;
      } else if (1.0 - p0 < 1e-12) {
        outcome = 0;
      } else {
        outcome = u < p0 ? 0 : 1;
      }
      if (outcome == 0) {
        r.state = cand;
      } else {
        // The second Kraus branch flips the sign of the d factor.
        r.state = apply_pauli_sum(r.state, prep_factor(layout, e, 0.5, -1));
      }
      r.state.normalize();
      r.signs[eidx] = outcome == 0 ? +1 : -1;
      r.outcomes.push_back(outcome);
    }
  }
  return r;
}

StateVector apply_mode_flips(const ModeLayout& layout, const StateVector& psi,
                             const std::vector<uint32_t>& sites) {
  // Descending order keeps every parity string clear of already flipped
  // modes; on the bare layout the listed configuration then comes out as
  // the plain basis state with no sign, which is what the embedding needs
  // to commute with operators that change the particle number.
  std::vector<uint32_t> order = sites;
  std::sort(order.begin(), order.end(), std::greater<uint32_t>());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw std::runtime_error("repeated site in mode flip list");
  }
  StateVector out = psi;
  for (const uint32_t site : order) {
    out = apply_pauli_sum(out, annihilation_op(layout, site));
    if (std::abs(out.norm() - 1.0) > 1e-9) {
      throw std::runtime_error("mode flip hit an unoccupied mode");
    }
    out.normalize();
  }
  return out;
}

StateVector embed_physical(const ModeLayout& layout, const StateVector& prepped,
                           const StateVector& psi_phys) {
  if (psi_phys.n_qubits != layout.n_sites) {
    throw std::runtime_error("physical state register mismatch");
  }
  StateVector out;
  out.n_qubits = prepped.n_qubits;
  out.amp = vec_alloc(prepped.dim());
  for (uint64_t x = 0; x < psi_phys.dim(); ++x) {
    const std::complex<double> cx = psi_phys.amp[x];
    if (std::abs(cx) == 0.0) continue;
    std::vector<uint32_t> sites;
    for (uint32_t i = 1; i <= layout.n_sites; ++i) {
      if ((x >> (i - 1)) & 1) sites.push_back(i);
    }
    const StateVector image = apply_mode_flips(layout, prepped, sites);
    for (uint64_t k = 0; k < out.dim(); ++k) out.amp[k] += cx * image.amp[k];
  }
  if (std::abs(out.norm() - 1.0) > 1e-9) {
    throw std::runtime_error("embedding lost norm");
  }
  out.normalize();
  return out;
}

std::vector<std::vector<PauliSum>> encoded_layer_terms(
    const EncodedModel& em, const std::vector<int>& signs) {
  std::vector<std::vector<PauliSum>> out(em.layers.size());
  for (size_t li = 0; li < em.layers.size(); ++li) {
    for (const uint32_t ti : em.layers[li]) {
      out[li].push_back(signed_term_op(em, ti, signs));
    }
  }
  return out;
}

std::vector<std::vector<PauliSum>> physical_layer_terms(const EncodedModel& em,
                                                        bool joint_layout) {
  const ModeLayout layout =
      joint_layout ? em.layout : ModeLayout{em.model.n_sites, 0};
  std::vector<std::vector<PauliSum>> out(em.layers.size());
  for (size_t li = 0; li < em.layers.size(); ++li) {
    for (const uint32_t ti : em.layers[li]) {
      out[li].push_back(physical_term_image(layout, em.model.terms[ti]));
    }
  }
  return out;
}

StateVector trotter_evolve_layers(
    const std::vector<std::vector<PauliSum>>& layers, double tau, uint32_t M,
    StateVector psi) {
  for (uint32_t rep = 0; rep < M; ++rep) {
    for (const auto& layer : layers) {
      for (const auto& op : layer) apply_exp_pauli_sum(psi, op, tau);
    }
  }
  return psi;
}

StateVector trotter_evolve(const EncodedModel& em, const std::vector<int>& signs,
                           double tau, uint32_t M, const StateVector& psi) {
  return trotter_evolve_layers(encoded_layer_terms(em, signs), tau, M, psi);
}

EquivalenceReport equivalence_check(const EncodedModel& em,
                                    const StateVector& psi_phys, double tau,
                                    uint32_t M) {
  if (em.layout.total_qubits() > kJointQubitCap) {
    throw std::runtime_error("joint register too large");
  }
  return equivalence_check(em, prepare_aux_oracle(em.layout, em.plan),
                           psi_phys, tau, M);
}

EquivalenceReport equivalence_check(const EncodedModel& em,
                                    const PrepResult& prep,
                                    const StateVector& psi_phys, double tau,
                                    uint32_t M) {
  if (em.layout.total_qubits() > kJointQubitCap) {
    throw std::runtime_error("joint register too large");
  }
  const StateVector psi0 = embed_physical(em.layout, prep.state, psi_phys);
  const auto enc = encoded_layer_terms(em, prep.signs);
  const auto phys = physical_layer_terms(em, false);
  std::vector<PauliTerm> checks(em.plan.edges.size());
  for (size_t e = 0; e < checks.size(); ++e) {
    checks[e] = signed_stabilizer(em, (uint32_t)e, prep.signs);
  }

  EquivalenceReport rep;
  rep.per_term_fidelity = 1.0;
  for (size_t li = 0; li < enc.size(); ++li) {
    for (size_t ti = 0; ti < enc[li].size(); ++ti) {
      StateVector a = psi0;
      apply_exp_pauli_sum(a, enc[li][ti], tau);
      StateVector b_phys = psi_phys;
      apply_exp_pauli_sum(b_phys, phys[li][ti], tau);
      const StateVector b = embed_physical(em.layout, prep.state, b_phys);
      rep.per_term_fidelity = std::min(rep.per_term_fidelity, fidelity(a, b));
    }
  }

  StateVector evolved = psi0;
  rep.aux_drift = 0.0;
  for (uint32_t m = 0; m < M; ++m) {
    evolved = trotter_evolve_layers(enc, tau, 1, std::move(evolved));
    for (const auto& p : checks) {
      const std::complex<double> ev = expectation(evolved, p);
      rep.aux_drift = std::max(rep.aux_drift, std::abs(ev - 1.0));
    }
  }
  StateVector ref_phys = trotter_evolve_layers(phys, tau, M, psi_phys);
  const StateVector ref = embed_physical(em.layout, prep.state, ref_phys);
  rep.full_fidelity = fidelity(evolved, ref);
  return rep;
}

PauliSum codespace_projector(const EncodedModel& em,
                             const std::vector<int>& signs) {
  if (em.stabilizers.size() > 12) {
    throw std::runtime_error("projector expansion too large");
  }
  PauliSum proj(PauliTerm::identity());
  for (uint32_t e = 0; e < em.stabilizers.size(); ++e) {
    PauliSum factor(PauliTerm::identity(0.5));
    factor.add_scaled(signed_stabilizer(em, e, signs), 0.5);
    proj = sum_mul(proj, factor);
    proj.canonicalize();
  }
  return proj;
}

double commutator_lambda(const std::vector<PauliSum>& layer_ops,
                         uint32_t n_qubits) {
  double lambda = 0.0;
  for (size_t a = 0; a < layer_ops.size(); ++a) {
    for (size_t b = a + 1; b < layer_ops.size(); ++b) {
      PauliSum comm = sum_mul(layer_ops[a], layer_ops[b]);
      PauliSum ba = sum_mul(layer_ops[b], layer_ops[a]);
      ba *= -1.0;
      comm += ba;
      comm.canonicalize();
      if (comm.terms.empty()) continue;
      lambda += spectral_norm(comm, n_qubits);
    }
  }
  return lambda;
}

double commutator_lambda_projected(const std::vector<PauliSum>& layer_ops,
                                   const PauliSum& projector,
                                   uint32_t n_qubits) {
  double lambda = 0.0;
  for (size_t a = 0; a < layer_ops.size(); ++a) {
    for (size_t b = a + 1; b < layer_ops.size(); ++b) {
      PauliSum comm = sum_mul(layer_ops[a], layer_ops[b]);
      PauliSum ba = sum_mul(layer_ops[b], layer_ops[a]);
      ba *= -1.0;
      comm += ba;
      comm.canonicalize();
      if (comm.terms.empty()) continue;
      PauliSum boxed = sum_mul(projector, sum_mul(comm, projector));
      boxed.canonicalize();
      if (boxed.terms.empty()) continue;
      lambda += spectral_norm(boxed, n_qubits);
    }
  }
  return lambda;
}

}  // namespace auxenc
