#include "auxenc/modes.hpp"

#include <stdexcept>
#include <string>

namespace auxenc {

uint32_t ModeLayout::qubit(uint32_t site, uint32_t level) const {
  if (site < 1 || site > n_sites) {
    throw std::runtime_error("ModeLayout: site " + std::to_string(site) +
                             " out of range 1.." + std::to_string(n_sites));
  }
  if (level > n_aux) {
    throw std::runtime_error("ModeLayout: level " + std::to_string(level) +
                             " out of range 0.." + std::to_string(n_aux));
  }
  return (site - 1) * (n_aux + 1) + level;
}

static PauliTerm string_and_letter(const ModeLayout& m, uint32_t site,
                                   uint32_t level, Pauli p) {
  const uint32_t q = m.qubit(site, level);
  PauliTerm t;
  t.letters.reserve(q + 1);
  for (uint32_t k = 0; k < q; ++k) t.letters.emplace_back(k, Pauli::Z);
  t.letters.emplace_back(q, p);
  return t;
}

PauliTerm majorana_c(const ModeLayout& m, uint32_t site, uint32_t level) {
  return string_and_letter(m, site, level, Pauli::X);
}

PauliTerm majorana_d(const ModeLayout& m, uint32_t site, uint32_t level) {
  PauliTerm t = string_and_letter(m, site, level, Pauli::Y);
  t.phase_pow = 2;  // d = i (b^dag - b) = -S Z_< Y
  return t;
}

uint32_t majorana_site(uint32_t index) { return (index + 1) / 2; }

bool majorana_is_c(uint32_t index) { return index % 2 == 1; }

PauliTerm majorana(const ModeLayout& m, uint32_t index) {
  if (index < 1 || index > 2 * m.n_sites) {
    throw std::runtime_error("majorana: index " + std::to_string(index) +
                             " out of range 1.." + std::to_string(2 * m.n_sites));
  }
  const uint32_t site = majorana_site(index);
  return majorana_is_c(index) ? majorana_c(m, site, 0) : majorana_d(m, site, 0);
}

PauliSum annihilation_op(const ModeLayout& m, uint32_t site, uint32_t level) {
  // a = (c + i d) / 2
  PauliSum s;
  s.add_scaled(majorana_c(m, site, level), 0.5);
  s.add_scaled(majorana_d(m, site, level), std::complex<double>(0.0, 0.5));
  s.canonicalize();
  return s;
}

PauliSum creation_op(const ModeLayout& m, uint32_t site, uint32_t level) {
  // a^dag = (c - i d) / 2
  PauliSum s;
  s.add_scaled(majorana_c(m, site, level), 0.5);
  s.add_scaled(majorana_d(m, site, level), std::complex<double>(0.0, -0.5));
  s.canonicalize();
  return s;
}

PauliSum number_op(const ModeLayout& m, uint32_t site) {
  PauliSum s = sum_mul(creation_op(m, site), annihilation_op(m, site));
  s.canonicalize();
  return s;
}

PauliSum jw_hopping(const ModeLayout& m, uint32_t i, uint32_t j, double t) {
  if (i == j) throw std::runtime_error("jw_hopping: sites must differ");
  PauliSum s = sum_mul(creation_op(m, i), annihilation_op(m, j));
  s += sum_mul(creation_op(m, j), annihilation_op(m, i));
  s *= t;
  s.canonicalize();
  return s;
}

PauliSum jw_density(const ModeLayout& m, uint32_t i, uint32_t j, double v) {
  if (i == j) throw std::runtime_error("jw_density: sites must differ");
  PauliSum s = sum_mul(number_op(m, i), number_op(m, j));
  s *= v;
  s.canonicalize();
  return s;
}

PauliSum jw_majorana_product(const ModeLayout& m, const std::vector<uint32_t>& idx,
                             double coeff) {
  PauliTerm prod = PauliTerm::identity(coeff);
  for (const uint32_t index : idx) prod = pauli_mul(prod, majorana(m, index));
  if (!prod.is_hermitian()) {
    throw std::runtime_error("jw_majorana_product: odd product is not Hermitian");
  }
  PauliSum s{prod};
  s.canonicalize();
  return s;
}

}  // namespace auxenc
