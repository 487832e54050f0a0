#include "auxenc/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "auxenc/rng.hpp"

namespace auxenc {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

uint32_t ceil_log2(uint64_t x) {
  uint32_t k = 0;
  while ((1ULL << k) < x) ++k;
  return k;
}

}  // namespace

bool GateLayer::entangling() const {
  for (const Gate& g : gates) {
    if (g.two_qubit()) return true;
  }
  return false;
}

uint32_t GateSchedule::depth() const {
  uint32_t d = 0;
  for (const GateLayer& l : layers) {
    if (l.entangling()) ++d;
  }
  return d;
}

uint32_t GateSchedule::total_layers() const {
  return static_cast<uint32_t>(layers.size());
}

uint64_t GateSchedule::gate_count() const {
  uint64_t n = 0;
  for (const GateLayer& l : layers) n += l.gates.size();
  return n;
}

void GateSchedule::validate() const {
  for (const GateLayer& l : layers) {
    std::set<uint32_t> busy;
    for (const Gate& g : l.gates) {
      if (g.q0 >= n_qubits || (g.two_qubit() && g.q1 >= n_qubits)) {
        throw std::runtime_error("gate operand outside the register");
      }
      if (g.two_qubit() && g.q0 == g.q1) {
        throw std::runtime_error("two-qubit gate with equal operands");
      }
      if (!busy.insert(g.q0).second ||
          (g.two_qubit() && !busy.insert(g.q1).second)) {
        throw std::runtime_error("qubit used twice within one layer");
      }
    }
  }
}

void ScheduleBuilder::add(const Gate& g) {
  if (g.two_qubit() && g.q0 == g.q1) {
    throw std::invalid_argument("two-qubit gate with equal operands");
  }
  const uint32_t top = g.max_qubit();
  if (top >= frontier_.size()) frontier_.resize(top + 1, 0);
  n_qubits_ = std::max(n_qubits_, top + 1);
  size_t layer = std::max(floor_, frontier_[g.q0]);
  if (g.two_qubit()) layer = std::max(layer, frontier_[g.q1]);
  if (layer >= layers_.size()) layers_.resize(layer + 1);
  layers_[layer].push_back(g);
  frontier_[g.q0] = layer + 1;
  if (g.two_qubit()) frontier_[g.q1] = layer + 1;
}

void ScheduleBuilder::barrier() { floor_ = layers_.size(); }

void ScheduleBuilder::align(const std::vector<uint32_t>& qubits) {
  size_t level = floor_;
  for (uint32_t q : qubits) {
    if (q < frontier_.size()) level = std::max(level, frontier_[q]);
  }
  uint32_t top = 0;
  for (uint32_t q : qubits) top = std::max(top, q);
  if (!qubits.empty() && top >= frontier_.size()) frontier_.resize(top + 1, 0);
  for (uint32_t q : qubits) frontier_[q] = level;
}

GateSchedule ScheduleBuilder::finish() {
  GateSchedule s;
  s.n_qubits = n_qubits_;
  s.global_phase = phase_;
  s.layers.reserve(layers_.size());
  for (auto& l : layers_) {
    GateLayer gl;
    gl.gates = std::move(l);
    s.layers.push_back(std::move(gl));
  }
  layers_.clear();
  frontier_.clear();
  floor_ = 0;
  phase_ = 0.0;
  n_qubits_ = 0;
  s.validate();
  return s;
}

namespace {

// Image of one Pauli letter under conjugation by a single Clifford gate,
// as a term with coefficient one.
PauliTerm letter_image(const Gate& g, uint32_t q, Pauli p) {
  auto one = [](uint32_t qq, Pauli pp, bool neg) {
    PauliTerm t = PauliTerm::single(qq, pp);
    if (neg) t.phase_pow = 2;
    return t;
  };
  auto two = [](uint32_t qa, Pauli pa, uint32_t qb, Pauli pb) {
    PauliTerm t;
    t.letters = {{qa, pa}, {qb, pb}};
    t.canonicalize();
    return t;
  };
  switch (g.kind) {
    case GateKind::H:
      if (q != g.q0) break;
      if (p == Pauli::X) return one(q, Pauli::Z, false);
      if (p == Pauli::Z) return one(q, Pauli::X, false);
      return one(q, Pauli::Y, true);
    case GateKind::X:
      if (q != g.q0) break;
      if (p == Pauli::X) return one(q, Pauli::X, false);
      return one(q, p, true);
    case GateKind::S:
      if (q != g.q0) break;
      if (p == Pauli::X) return one(q, Pauli::Y, false);
      if (p == Pauli::Y) return one(q, Pauli::X, true);
      return one(q, Pauli::Z, false);
    case GateKind::Sdg:
      if (q != g.q0) break;
      if (p == Pauli::X) return one(q, Pauli::Y, true);
      if (p == Pauli::Y) return one(q, Pauli::X, false);
      return one(q, Pauli::Z, false);
    case GateKind::CX:
      if (q == g.q0) {
        if (p == Pauli::X) return two(g.q0, Pauli::X, g.q1, Pauli::X);
        if (p == Pauli::Y) return two(g.q0, Pauli::Y, g.q1, Pauli::X);
        return one(q, Pauli::Z, false);
      }
      if (q == g.q1) {
        if (p == Pauli::X) return one(q, Pauli::X, false);
        if (p == Pauli::Y) return two(g.q0, Pauli::Z, g.q1, Pauli::Y);
        return two(g.q0, Pauli::Z, g.q1, Pauli::Z);
      }
      break;
    case GateKind::CZ:
      if (q == g.q0) {
        if (p == Pauli::X) return two(g.q0, Pauli::X, g.q1, Pauli::Z);
        if (p == Pauli::Y) return two(g.q0, Pauli::Y, g.q1, Pauli::Z);
        return one(q, Pauli::Z, false);
      }
      if (q == g.q1) {
        if (p == Pauli::X) return two(g.q0, Pauli::Z, g.q1, Pauli::X);
        if (p == Pauli::Y) return two(g.q0, Pauli::Z, g.q1, Pauli::Y);
        return one(q, Pauli::Z, false);
      }
      break;
    default:
      break;
  }
  return PauliTerm::single(q, p);
}

}  // namespace

PauliTerm conjugate_through(const Gate& g, const PauliTerm& t) {
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::CX:
    case GateKind::CZ:
      break;
    default:
      throw std::runtime_error("conjugation requires a Clifford gate");
  }
  PauliTerm out = PauliTerm::identity(t.coeff);
  out.phase_pow = t.phase_pow;
  for (const auto& [q, p] : t.letters) {
    out = pauli_mul(out, letter_image(g, q, p));
  }
  out.canonicalize();
  return out;
}

PauliTerm conjugate_through(const std::vector<Gate>& gates, PauliTerm t) {
  for (const Gate& g : gates) t = conjugate_through(g, t);
  return t;
}

namespace {

// Action of a Pauli term on a computational basis state: |bits> maps to
// amplitude * |bits'>. Letters act on distinct qubits, so the order of
// application does not matter.
std::pair<uint64_t, std::complex<double>> basis_action(const PauliTerm& t,
                                                       uint64_t bits) {
  std::complex<double> amp = t.amplitude();
  for (const auto& [q, p] : t.letters) {
    const bool set = (bits >> q) & 1ULL;
    switch (p) {
      case Pauli::X:
        bits ^= 1ULL << q;
        break;
      case Pauli::Y:
        amp *= set ? -kI : kI;
        bits ^= 1ULL << q;
        break;
      case Pauli::Z:
        if (set) amp = -amp;
        break;
    }
  }
  return {bits, amp};
}

Gate inverse_of(const Gate& g) {
  switch (g.kind) {
    case GateKind::S:
      return Gate::sdg(g.q0);
    case GateKind::Sdg:
      return Gate::s(g.q0);
    case GateKind::RZ:
      return Gate::rz(g.q0, -g.angle);
    case GateKind::H:
    case GateKind::X:
    case GateKind::CX:
    case GateKind::CZ:
      return g;
    default:
      throw std::runtime_error("gate has no scheduled inverse");
  }
}

// Maps the letter at q to Z: X needs H, Y needs Sdg then H.
void push_basis_change(std::vector<Gate>& prefix, uint32_t q, Pauli p) {
  if (p == Pauli::X) {
    prefix.push_back(Gate::h(q));
  } else if (p == Pauli::Y) {
    prefix.push_back(Gate::sdg(q));
    prefix.push_back(Gate::h(q));
  }
}

// Balanced parity fold of the member qubits into the root: pairs fold in
// parallel rounds, ceil(log2(w)) two-qubit layers for w holders.
void push_parity_tree(std::vector<Gate>& prefix, uint32_t root,
                      const std::vector<uint32_t>& members) {
  std::vector<uint32_t> holders;
  holders.push_back(root);
  holders.insert(holders.end(), members.begin(), members.end());
  while (holders.size() > 1) {
    std::vector<uint32_t> next;
    for (size_t i = 0; i < holders.size(); i += 2) {
      if (i + 1 < holders.size()) {
        prefix.push_back(Gate::cx(holders[i + 1], holders[i]));
      }
      next.push_back(holders[i]);
    }
    holders.swap(next);
  }
}

double real_amplitude(const PauliTerm& t, const char* what) {
  const std::complex<double> a = t.amplitude();
  if (std::abs(a.imag()) > 1e-12 * std::max(1.0, std::abs(a.real()))) {
    throw std::invalid_argument(std::string(what) +
                                " amplitude must be real for a rotation");
  }
  return a.real();
}

void append_gates(ScheduleBuilder& b, const std::vector<Gate>& gates) {
  for (const Gate& g : gates) b.add(g);
}

void append_inverse(ScheduleBuilder& b, const std::vector<Gate>& gates) {
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    b.add(inverse_of(*it));
  }
}

// exp(-i angle * term) through a basis change, a CX parity tree into the
// lowest support qubit, one Z rotation, and the mirrored suffix.
void emit_pauli_gadget(ScheduleBuilder& b, const PauliTerm& term,
                       double angle) {
  PauliTerm t = term;
  t.canonicalize();
  const double a = real_amplitude(t, "rotation term");
  if (t.coeff == 0.0) return;
  if (t.letters.empty()) {
    b.add_phase(-angle * a);
    return;
  }

  std::vector<Gate> basis;
  std::vector<uint32_t> support;
  for (const auto& [q, p] : t.letters) {
    push_basis_change(basis, q, p);
    support.push_back(q);
  }
  const uint32_t root = t.letters.front().first;
  std::vector<uint32_t> members;
  for (size_t i = 1; i < t.letters.size(); ++i) {
    members.push_back(t.letters[i].first);
  }
  std::vector<Gate> tree;
  push_parity_tree(tree, root, members);

  std::vector<Gate> prefix = basis;
  prefix.insert(prefix.end(), tree.begin(), tree.end());
  PauliTerm plain = t;
  plain.coeff = 1.0;
  plain.phase_pow = 0;
  PauliTerm image = conjugate_through(prefix, plain);
  image.canonicalize();
  if (image.letters.size() != 1 || image.letters[0].first != root ||
      image.letters[0].second != Pauli::Z || !image.is_hermitian()) {
    throw std::logic_error("parity tree failed to reduce the rotation axis");
  }
  const double rot_sign = image.amplitude().real();

  // Aligning after the basis change keeps each tree round in one layer;
  // otherwise the two-gate Y frames skew the rounds apart.
  append_gates(b, basis);
  b.align(support);
  append_gates(b, tree);
  b.add(Gate::rz(root, 2.0 * angle * a * rot_sign));
  b.align(support);
  append_inverse(b, tree);
  append_inverse(b, basis);
}

// True when a and b share support and differ by an X<->Y swap at exactly
// two qubits, the shape the fused gadget handles.
bool fused_pair_shape(const PauliTerm& a, const PauliTerm& b) {
  if (a.letters.size() != b.letters.size()) return false;
  if (!a.is_hermitian() || !b.is_hermitian()) return false;
  uint32_t diffs = 0;
  for (size_t i = 0; i < a.letters.size(); ++i) {
    if (a.letters[i].first != b.letters[i].first) return false;
    const Pauli pa = a.letters[i].second;
    const Pauli pb = b.letters[i].second;
    if (pa == pb) continue;
    if (pa == Pauli::Z || pb == Pauli::Z) return false;
    ++diffs;
  }
  return diffs == 2;
}

// exp(-i angle * (a + b)) for a fused pair: both rotation axes ride one
// pair of split parity trees rooted at the two differing qubits, so the
// two-qubit depth equals a single gadget of the same weight.
void emit_pauli_pair_gadget(ScheduleBuilder& b, const PauliTerm& ta,
                            const PauliTerm& tb, double angle) {
  PauliTerm x = ta;
  PauliTerm y = tb;
  x.canonicalize();
  y.canonicalize();
  const double a1 = real_amplitude(x, "first pair term");
  const double a2 = real_amplitude(y, "second pair term");
  if (!fused_pair_shape(x, y)) {
    throw std::invalid_argument(
        "pair gadget needs equal support with an X/Y swap at two qubits");
  }

  uint32_t p = 0, q = 0;
  bool have_p = false;
  for (size_t i = 0; i < x.letters.size(); ++i) {
    if (x.letters[i].second == y.letters[i].second) continue;
    if (!have_p) {
      p = x.letters[i].first;
      have_p = true;
    } else {
      q = x.letters[i].first;
    }
  }

  std::vector<Gate> basis;
  std::vector<uint32_t> support;
  for (const auto& [qq, pp] : x.letters) {
    push_basis_change(basis, qq, pp);
    support.push_back(qq);
  }
  std::vector<uint32_t> others;
  for (const auto& [qq, pp] : x.letters) {
    (void)pp;
    if (qq != p && qq != q) others.push_back(qq);
  }
  const size_t half = (others.size() + 1) / 2;
  std::vector<uint32_t> team_p(others.begin(), others.begin() + half);
  std::vector<uint32_t> team_q(others.begin() + half, others.end());
  std::vector<Gate> fold;
  push_parity_tree(fold, p, team_p);
  push_parity_tree(fold, q, team_q);
  fold.push_back(Gate::s(p));
  fold.push_back(Gate::s(q));
  fold.push_back(Gate::cx(p, q));

  std::vector<Gate> prefix = basis;
  prefix.insert(prefix.end(), fold.begin(), fold.end());

  PauliTerm plain_a = x;
  plain_a.coeff = 1.0;
  plain_a.phase_pow = 0;
  PauliTerm plain_b = y;
  plain_b.coeff = 1.0;
  plain_b.phase_pow = 0;
  PauliTerm ia = conjugate_through(prefix, plain_a);
  PauliTerm ib = conjugate_through(prefix, plain_b);
  ia.canonicalize();
  ib.canonicalize();
  if (ia.letters.size() != 1 || ia.letters[0].first != q ||
      ia.letters[0].second != Pauli::Z || !ia.is_hermitian() ||
      ib.letters.size() != 1 || ib.letters[0].first != p ||
      ib.letters[0].second != Pauli::X || !ib.is_hermitian()) {
    throw std::logic_error("pair trees failed to reduce the rotation axes");
  }
  const double sa = ia.amplitude().real();
  const double sb = ib.amplitude().real();

  append_gates(b, basis);
  b.align(support);
  append_gates(b, fold);
  b.add(Gate::rz(q, 2.0 * angle * a1 * sa));
  b.add(Gate::h(p));
  b.add(Gate::rz(p, 2.0 * angle * a2 * sb));
  b.add(Gate::h(p));
  b.align(support);
  append_inverse(b, fold);
  append_inverse(b, basis);
}

// CZ from control to every target through doubling copies of the control
// onto scratch. Picks the copy count minimizing 2r + ceil(t / 2^r).
uint32_t emit_cz_fanout(ScheduleBuilder& b, uint32_t control,
                        std::vector<uint32_t> targets, uint32_t scratch_base) {
  if (targets.empty()) return 0;
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
    throw std::invalid_argument("duplicate fanout target");
  }
  if (std::binary_search(targets.begin(), targets.end(), control)) {
    throw std::invalid_argument("fanout control listed as a target");
  }
  const uint64_t t = targets.size();
  uint32_t best_r = 0;
  uint64_t best_depth = t;
  for (uint32_t r = 1; r <= ceil_log2(t); ++r) {
    const uint64_t d = 2ULL * r + (t + (1ULL << r) - 1) / (1ULL << r);
    if (d < best_depth) {
      best_depth = d;
      best_r = r;
    }
  }

  std::vector<uint32_t> copies{control};
  std::vector<Gate> down;
  uint32_t next = scratch_base;
  for (uint32_t round = 0; round < best_r; ++round) {
    const size_t sz = copies.size();
    for (size_t i = 0; i < sz; ++i) {
      down.push_back(Gate::cx(copies[i], next));
      copies.push_back(next);
      ++next;
    }
  }
  append_gates(b, down);
  for (size_t j = 0; j < targets.size(); ++j) {
    b.add(Gate::cz(copies[j % copies.size()], targets[j]));
  }
  append_inverse(b, down);
  return next - scratch_base;
}

}  // namespace

GateSchedule pauli_gadget(const PauliTerm& term, double angle) {
  ScheduleBuilder b;
  emit_pauli_gadget(b, term, angle);
  GateSchedule s = b.finish();
  PauliTerm t = term;
  t.canonicalize();
  s.n_qubits = std::max(s.n_qubits, t.letters.empty() ? 0 : t.max_qubit() + 1);
  return s;
}

GateSchedule pauli_pair_gadget(const PauliTerm& a, const PauliTerm& b,
                               double angle) {
  ScheduleBuilder builder;
  emit_pauli_pair_gadget(builder, a, b, angle);
  return builder.finish();
}

GateSchedule cz_fanout(uint32_t control, const std::vector<uint32_t>& targets) {
  ScheduleBuilder b;
  uint32_t top = control;
  for (const uint32_t t : targets) top = std::max(top, t);
  const uint32_t scratch = emit_cz_fanout(b, control, targets, top + 1);
  GateSchedule s = b.finish();
  s.n_qubits = std::max(s.n_qubits, top + 1);
  s.ancilla_count = scratch;
  return s;
}

OrderedPrepSchedule ordered_prep_schedule(const ModeLayout& layout,
                                          uint32_t level) {
  if (level == 0 || level > layout.n_aux) {
    throw std::invalid_argument("preparation level outside the register");
  }
  const uint32_t n = layout.n_sites;
  const uint32_t nu = layout.n_aux;
  OrderedPrepSchedule out;
  out.level = level;
  out.padded = (n % 2) != 0;
  const uint32_t n_eff = n + (out.padded ? 1 : 0);
  const uint32_t n_blocks = n / 2;
  out.measure_ancillas = n_blocks;
  const uint32_t base = layout.total_qubits();
  uint32_t scratch_top = base + n_blocks;

  ScheduleBuilder b;
  for (uint32_t k = 1; k <= n_blocks; ++k) {
    const uint32_t tail = 2 * k - 1;
    const uint32_t head = 2 * k;
    const uint32_t anc = base + (k - 1);
    const uint32_t c_core = layout.qubit(tail, level);
    const uint32_t d_core = layout.qubit(head, level);

    // Z parity of each string-truncated pair operator, mod 2 over the
    // below-level string and the full-block closure powers.
    std::map<uint32_t, int> c_par, d_par;
    const bool close_c = ((n_eff / 2 + 1 - k) % 2) != 0;
    const bool close_d = ((n_eff / 2 - k) % 2) != 0;
    for (uint32_t j = 0; j < level; ++j) ++c_par[layout.qubit(tail, j)];
    if (close_c) {
      for (uint32_t j = 0; j <= nu; ++j) ++c_par[layout.qubit(tail, j)];
    }
    for (uint32_t j = 0; j <= nu; ++j) ++d_par[layout.qubit(tail, j)];
    for (uint32_t j = 0; j < level; ++j) ++d_par[layout.qubit(head, j)];
    if (close_d) {
      for (uint32_t j = 0; j <= nu; ++j) ++d_par[layout.qubit(head, j)];
    }
    std::vector<uint32_t> c_targets, d_targets;
    for (const auto& [q, c] : c_par) {
      if (c % 2) c_targets.push_back(q);
    }
    for (const auto& [q, c] : d_par) {
      if (c % 2) d_targets.push_back(q);
    }

    b.add(Gate::h(anc));
    b.add(Gate::x(anc));
    b.add(Gate::cx(anc, c_core));
    const uint32_t used_c = emit_cz_fanout(b, anc, c_targets, scratch_top);
    b.add(Gate::x(anc));
    b.add(Gate::ciy(anc, d_core));
    const uint32_t used_d = emit_cz_fanout(b, anc, d_targets, scratch_top);
    b.add(Gate::h(anc));
    scratch_top += std::max(used_c, used_d);

    // Branch words in application order: outcome 0 keeps their sum,
    // outcome 1 their difference.
    PauliTerm w0 = PauliTerm::single(c_core, Pauli::X);
    for (const uint32_t z : c_targets) {
      w0 = pauli_mul(PauliTerm::single(z, Pauli::Z), w0);
    }
    PauliTerm w1 = PauliTerm::single(d_core, Pauli::Y);
    w1.phase_pow = 1;
    for (const uint32_t z : d_targets) {
      w1 = pauli_mul(PauliTerm::single(z, Pauli::Z), w1);
    }

    const auto [bits_a, mu0] = basis_action(w0, 0);
    const auto [bits_b, mu1] = basis_action(w1, 0);
    OrientedEdge e;
    e.tail = tail;
    e.head = head;
    e.reg = level;
    const PauliTerm stab = stabilizer_term(layout, e);
    const auto [pa_bits, pi_a] = basis_action(stab, bits_a);
    const auto [pb_bits, pi_b] = basis_action(stab, bits_b);
    if (bits_a == bits_b || pa_bits != bits_b || pb_bits != bits_a) {
      throw std::logic_error("prep block does not couple the branch states");
    }
    const std::complex<double> s_from_b = mu1 * pi_b / mu0;
    const std::complex<double> s_from_a = mu0 * pi_a / mu1;
    if (std::abs(s_from_b - s_from_a) > 1e-12 ||
        std::abs(s_from_b.imag()) > 1e-12 ||
        std::abs(std::abs(s_from_b.real()) - 1.0) > 1e-12) {
      throw std::logic_error("prep block sign is not a definite eigenvalue");
    }

    PrepBlock blk;
    blk.tail_site = tail;
    blk.head_site = head;
    blk.anc = anc;
    blk.base_sign = s_from_b.real() > 0 ? +1 : -1;
    out.blocks.push_back(blk);
    out.tilde_weight = std::max({out.tilde_weight, w0.weight(), w1.weight()});
  }
  out.tilde_weight_formula = std::min(level, nu - level);

  b.barrier();
  for (const PrepBlock& blk : out.blocks) b.add(Gate::measure(blk.anc));

  out.scratch_ancillas = scratch_top - (base + n_blocks);
  out.schedule = b.finish();
  out.schedule.n_qubits =
      std::max(out.schedule.n_qubits, base + n_blocks + out.scratch_ancillas);
  out.schedule.ancilla_count = out.measure_ancillas + out.scratch_ancillas;
  return out;
}

namespace {

void apply_gate(std::vector<std::complex<double>>& amp, const Gate& g) {
  const uint64_t dim = amp.size();
  const uint64_t m0 = 1ULL << g.q0;
  switch (g.kind) {
    case GateKind::H: {
      const double k = 1.0 / std::sqrt(2.0);
      for (uint64_t i = 0; i < dim; ++i) {
        if (i & m0) continue;
        const auto a = amp[i];
        const auto b = amp[i | m0];
        amp[i] = (a + b) * k;
        amp[i | m0] = (a - b) * k;
      }
      return;
    }
    case GateKind::X:
      for (uint64_t i = 0; i < dim; ++i) {
        if (!(i & m0)) std::swap(amp[i], amp[i | m0]);
      }
      return;
    case GateKind::S:
      for (uint64_t i = 0; i < dim; ++i) {
        if (i & m0) amp[i] *= kI;
      }
      return;
    case GateKind::Sdg:
      for (uint64_t i = 0; i < dim; ++i) {
        if (i & m0) amp[i] *= -kI;
      }
      return;
    case GateKind::RZ: {
      const std::complex<double> lo = std::exp(-kI * (g.angle / 2.0));
      const std::complex<double> hi = std::exp(kI * (g.angle / 2.0));
      for (uint64_t i = 0; i < dim; ++i) {
        amp[i] *= (i & m0) ? hi : lo;
      }
      return;
    }
    case GateKind::CX: {
      const uint64_t m1 = 1ULL << g.q1;
      for (uint64_t i = 0; i < dim; ++i) {
        if ((i & m0) && !(i & m1)) std::swap(amp[i], amp[i | m1]);
      }
      return;
    }
    case GateKind::CZ: {
      const uint64_t m1 = 1ULL << g.q1;
      for (uint64_t i = 0; i < dim; ++i) {
        if ((i & m0) && (i & m1)) amp[i] = -amp[i];
      }
      return;
    }
    case GateKind::CIY: {
      // iY maps |0> to -|1> and |1> to |0>.
      const uint64_t m1 = 1ULL << g.q1;
      for (uint64_t i = 0; i < dim; ++i) {
        if ((i & m0) && !(i & m1)) {
          const auto lo = amp[i];
          amp[i] = amp[i | m1];
          amp[i | m1] = -lo;
        }
      }
      return;
    }
    case GateKind::Measure:
      throw std::logic_error("measurement routed to the gate applier");
  }
}

}  // namespace

ScheduleRun simulate_schedule(const GateSchedule& s, const StateVector& psi0,
                              uint64_t seed) {
  const uint32_t n = std::max(s.n_qubits, psi0.n_qubits);
  if (n > 26) throw std::invalid_argument("schedule too wide to simulate");
  ScheduleRun run;
  run.state.n_qubits = n;
  run.state.amp.assign(1ULL << n, 0.0);
  std::copy(psi0.amp.begin(), psi0.amp.end(), run.state.amp.begin());

  auto& amp = run.state.amp;
  uint64_t event = 0;
  for (const GateLayer& layer : s.layers) {
    for (const Gate& g : layer.gates) {
      if (g.kind != GateKind::Measure) {
        apply_gate(amp, g);
        continue;
      }
      const uint64_t mask = 1ULL << g.q0;
      double p0 = 0.0;
      for (uint64_t i = 0; i < amp.size(); ++i) {
        if (!(i & mask)) p0 += std::norm(amp[i]);
      }
      Rng rng(Rng::mix(seed, event));
      ++event;
      const double u = rng.uniform();
      int outcome;
      if (p0 < 1e-12) {
        outcome = 1;
      } else if (1.0 - p0 < 1e-12) {
        outcome = 0;
      } else {
        outcome = u < p0 ? 0 : 1;
      }
      const double scale =
          1.0 / std::sqrt(outcome == 0 ? p0 : 1.0 - p0);
      for (uint64_t i = 0; i < amp.size(); ++i) {
        const bool hit = (i & mask) != 0;
        if (hit == (outcome == 0)) {
          amp[i] = 0.0;
        } else {
          amp[i] *= scale;
        }
      }
      run.outcomes.push_back(outcome);
    }
  }
  if (s.global_phase != 0.0) {
    const std::complex<double> ph = std::exp(kI * s.global_phase);
    for (auto& a : amp) a *= ph;
  }
  return run;
}

std::vector<int> prep_signs_from_outcomes(const OrderedPrepSchedule& prep,
                                          const std::vector<int>& outcomes) {
  if (outcomes.size() != prep.blocks.size()) {
    throw std::invalid_argument("outcome count does not match the blocks");
  }
  std::vector<int> signs(prep.blocks.size(), +1);
  for (size_t k = 0; k < prep.blocks.size(); ++k) {
    if (outcomes[k] != 0 && outcomes[k] != 1) {
      throw std::invalid_argument("outcomes must be 0 or 1");
    }
    signs[k] = prep.blocks[k].base_sign * (outcomes[k] == 0 ? +1 : -1);
  }
  return signs;
}

DepthCost permutation_cost(uint32_t n_modes, uint32_t chi,
                           PermutationMode mode, const CostModel& cm) {
  if (n_modes == 0) throw std::invalid_argument("permutation of zero modes");
  DepthCost dc;
  dc.formula = true;
  if (mode == PermutationMode::WithMeasurement) {
    dc.depth = cm.perm_meas_const * static_cast<double>(ceil_log2(n_modes));
    dc.ancillas = (static_cast<uint64_t>((chi + 1) / 2) + 1) * n_modes;
  } else {
    const uint64_t cn = static_cast<uint64_t>(std::max<uint32_t>(chi, 1)) *
                        static_cast<uint64_t>(n_modes);
    const double lg = static_cast<double>(ceil_log2(cn));
    dc.depth = cm.perm_unmeas_const * lg * lg;
    dc.ancillas = 0;
  }
  return dc;
}

namespace {

// One color's worth of gadgets. Terms whose sum needs several words fall
// back to sequential gadgets, which is exact when the words commute.
void emit_term_gadgets(ScheduleBuilder& b, const PauliSum& term, double tau) {
  PauliSum ps = term;
  ps.canonicalize();
  std::vector<PauliTerm> words;
  for (const PauliTerm& w : ps.terms) {
    if (w.coeff != 0.0) words.push_back(w);
  }
  if (words.empty()) return;
  if (words.size() == 1) {
    emit_pauli_gadget(b, words[0], tau);
    return;
  }
  if (words.size() == 2 && fused_pair_shape(words[0], words[1])) {
    emit_pauli_pair_gadget(b, words[0], words[1], tau);
    return;
  }
  for (size_t i = 0; i < words.size(); ++i) {
    for (size_t j = i + 1; j < words.size(); ++j) {
      if (!pauli_commute(words[i], words[j])) {
        throw std::runtime_error(
            "term words do not commute; no exact gadget split");
      }
    }
  }
  for (const PauliTerm& w : words) emit_pauli_gadget(b, w, tau);
}

std::vector<int> default_signs(const EncodedModel& em,
                               const std::vector<int>& signs) {
  if (!signs.empty()) return signs;
  return std::vector<int>(em.plan.edges.size(), +1);
}

}  // namespace

GateSchedule trotter_step_schedule(const EncodedModel& em, double tau,
                                   const std::vector<int>& signs) {
  const auto layers = encoded_layer_terms(em, default_signs(em, signs));
  ScheduleBuilder b;
  bool first = true;
  for (const auto& layer : layers) {
    if (layer.empty()) continue;
    if (!first) b.barrier();
    first = false;
    for (const PauliSum& term : layer) emit_term_gadgets(b, term, tau);
  }
  GateSchedule s = b.finish();
  s.n_qubits = std::max(s.n_qubits, em.layout.total_qubits());
  return s;
}

DepthReport full_depth_report(const EncodedModel& em, const CostModel& cm) {
  const ModeLayout& layout = em.layout;
  const uint32_t n = layout.n_sites;
  const uint32_t nu = layout.n_aux;
  const uint32_t n_blocks = n / 2;
  uint32_t chi = 0;
  for (const OrientedEdge& e : em.plan.edges) chi = std::max(chi, e.color);

  double prep_sum = 0.0;
  uint32_t prep_max = 0;
  uint64_t scratch_max = 0;
  for (uint32_t level = 1; level <= nu; ++level) {
    const OrderedPrepSchedule p = ordered_prep_schedule(layout, level);
    const uint32_t d = p.schedule.depth();
    prep_sum += d;
    prep_max = std::max(prep_max, d);
    scratch_max = std::max<uint64_t>(scratch_max, p.scratch_ancillas);
  }
  const DepthCost perm_meas =
      permutation_cost(n, chi, PermutationMode::WithMeasurement, cm);
  const DepthCost perm_unit =
      permutation_cost(n, chi, PermutationMode::WithoutMeasurement, cm);
  if (scratch_max > perm_meas.ancillas) {
    throw std::logic_error(
        "fanout scratch does not fit the permutation ancilla pool");
  }

  const auto layers = encoded_layer_terms(em, default_signs(em, {}));
  uint32_t color_max = 0;
  for (const auto& layer : layers) {
    ScheduleBuilder lb;
    for (const PauliSum& term : layer) emit_term_gadgets(lb, term, 1.0);
    color_max = std::max(color_max, lb.finish().depth());
  }
  const GateSchedule step = trotter_step_schedule(em, 1.0);

  DepthReport r;
  r.rows.push_back({"attach auxiliary registers", 0.0,
                    static_cast<uint64_t>(nu) * n, false});
  r.rows.push_back({"pair stabilizer preparation (one register)",
                    static_cast<double>(prep_max), n_blocks, true});
  r.rows.push_back({"mode permutation (measured)", perm_meas.depth,
                    perm_meas.ancillas, false});
  r.rows.push_back(
      {"mode permutation (unitary)", perm_unit.depth, perm_unit.ancillas,
       false});
  r.rows.push_back({"single color evolution layer",
                    static_cast<double>(color_max), 0, true});
  r.rows.push_back(
      {"full evolution step", static_cast<double>(step.depth()), 0, true});
  r.prep_depth = 2.0 * prep_sum + 2.0 * nu * perm_meas.depth;
  r.per_step_depth = step.depth();
  r.ancilla_total = (2ULL * nu + 1ULL) * n + n_blocks;
  r.padded_sites = n % 2;
  return r;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_u64(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string render_depth_table(const DepthReport& report) {
  const char* headers[4] = {"operation", "depth", "ancillas", "kind"};
  std::vector<std::array<std::string, 4>> cells;
  for (const DepthRow& row : report.rows) {
    cells.push_back({row.operation, fmt_double(row.depth),
                     fmt_u64(row.ancillas),
                     row.measured ? "measured" : "formula"});
  }
  size_t width[4];
  for (int c = 0; c < 4; ++c) {
    width[c] = std::string(headers[c]).size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit_row = [&](const std::array<std::string, 4>& row) {
    for (int c = 0; c < 4; ++c) {
      out += row[c];
      if (c < 3) out += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out += '\n';
  };
  emit_row({headers[0], headers[1], headers[2], headers[3]});
  for (const auto& row : cells) emit_row(row);
  out += '\n';
  out += "preparation depth: " + fmt_double(report.prep_depth) + '\n';
  out += "per-step depth: " + fmt_u64(report.per_step_depth) + '\n';
  out += "total ancillas: " + fmt_u64(report.ancilla_total) + '\n';
  out += "padded sites: " + fmt_u64(report.padded_sites) + '\n';
  return out;
}

std::string render_depth_csv(const DepthReport& report) {
  std::string out = "operation,depth,ancillas,kind\n";
  for (const DepthRow& row : report.rows) {
    out += row.operation;
    out += ',';
    out += fmt_double(row.depth);
    out += ',';
    out += fmt_u64(row.ancillas);
    out += ',';
    out += row.measured ? "measured" : "formula";
    out += '\n';
  }
  return out;
}

}  // namespace auxenc
