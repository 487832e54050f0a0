#include "auxenc/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace auxenc {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::runtime_error("pauli_char: bad letter");
}

PauliTerm PauliTerm::identity(double c) {
  PauliTerm t;
  t.coeff = c;
  t.canonicalize();
  return t;
}

PauliTerm PauliTerm::single(uint32_t qubit, Pauli p, double c) {
  PauliTerm t;
  t.letters.emplace_back(qubit, p);
  t.coeff = c;
  t.canonicalize();
  return t;
}

std::complex<double> PauliTerm::amplitude() const {
  static const std::complex<double> unit[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return coeff * unit[((phase_pow % 4) + 4) % 4];
}

std::vector<uint32_t> PauliTerm::support() const {
  std::vector<uint32_t> q;
  q.reserve(letters.size());
  for (const auto& [qubit, p] : letters) q.push_back(qubit);
  return q;
}

uint32_t PauliTerm::max_qubit() const {
  return letters.empty() ? 0 : letters.back().first;
}

void PauliTerm::canonicalize() {
  std::sort(letters.begin(), letters.end());
  for (size_t k = 1; k < letters.size(); ++k) {
    if (letters[k].first == letters[k - 1].first) {
      throw std::runtime_error("PauliTerm: duplicate qubit " +
                               std::to_string(letters[k].first));
    }
  }
  if (coeff < 0 || std::signbit(coeff)) {
    coeff = -coeff;
    phase_pow += 2;
  }
  phase_pow = ((phase_pow % 4) + 4) % 4;
}

static std::string format_coeff(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", c);
  return buf;
}

std::string PauliTerm::to_string() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string out = prefix[((phase_pow % 4) + 4) % 4];
  out += format_coeff(coeff);
  for (const auto& [qubit, p] : letters) {
    out += ' ';
    out += pauli_char(p);
    out += std::to_string(qubit);
  }
  return out;
}

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
  PauliTerm r;
  r.coeff = a.coeff * b.coeff;
  r.phase_pow = a.phase_pow + b.phase_pow;
  r.letters.reserve(a.letters.size() + b.letters.size());
  size_t ia = 0, ib = 0;
  while (ia < a.letters.size() || ib < b.letters.size()) {
    if (ib == b.letters.size() ||
        (ia < a.letters.size() && a.letters[ia].first < b.letters[ib].first)) {
      r.letters.push_back(a.letters[ia++]);
    } else if (ia == a.letters.size() ||
               b.letters[ib].first < a.letters[ia].first) {
      r.letters.push_back(b.letters[ib++]);
    } else {
      const auto [q, pa] = a.letters[ia++];
      const auto pb = b.letters[ib++].second;
      if (pa == pb) continue;  // same letter squares to the identity
      const int va = static_cast<int>(pa), vb = static_cast<int>(pb);
      const auto pr = static_cast<Pauli>(6 - va - vb);
      r.phase_pow += (vb == va % 3 + 1) ? 1 : 3;
      r.letters.emplace_back(q, pr);
    }
  }
  r.canonicalize();
  return r;
}

PauliTerm pauli_adjoint(const PauliTerm& a) {
  PauliTerm r = a;
  r.phase_pow = (4 - ((a.phase_pow % 4) + 4) % 4) % 4;
  return r;
}

bool pauli_commute(const PauliTerm& a, const PauliTerm& b) {
  size_t ia = 0, ib = 0;
  int anti = 0;
  while (ia < a.letters.size() && ib < b.letters.size()) {
    if (a.letters[ia].first < b.letters[ib].first) {
      ++ia;
    } else if (b.letters[ib].first < a.letters[ia].first) {
      ++ib;
    } else {
      if (a.letters[ia].second != b.letters[ib].second) ++anti;
      ++ia;
      ++ib;
    }
  }
  return anti % 2 == 0;
}

bool same_letters(const PauliTerm& a, const PauliTerm& b) {
  return a.letters == b.letters;
}

PauliTerm parse_pauli_term(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  if (!(in >> head)) throw std::runtime_error("pauli parse: empty term");

  PauliTerm t;
  size_t pos = 0;
  int sign = 1;
  if (pos < head.size() && (head[pos] == '+' || head[pos] == '-')) {
    sign = head[pos] == '-' ? -1 : 1;
    ++pos;
  }
  if (pos < head.size() && head[pos] == 'i') {
    t.phase_pow = 1;
    ++pos;
  }
  if (pos < head.size()) {
    size_t used = 0;
    try {
      t.coeff = std::stod(head.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::runtime_error("pauli parse: bad coefficient in '" + head + "'");
    }
    if (used != head.size() - pos) {
      throw std::runtime_error("pauli parse: trailing junk in '" + head + "'");
    }
  } else {
    t.coeff = 1.0;
  }
  if (sign < 0) t.phase_pow += 2;

  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2) throw std::runtime_error("pauli parse: bad letter '" + tok + "'");
    Pauli p;
    switch (tok[0]) {
      case 'X': p = Pauli::X; break;
      case 'Y': p = Pauli::Y; break;
      case 'Z': p = Pauli::Z; break;
      default:
        throw std::runtime_error("pauli parse: bad letter '" + tok + "'");
    }
    size_t used = 0;
    unsigned long q = 0;
    try {
      q = std::stoul(tok.substr(1), &used);
    } catch (const std::exception&) {
      throw std::runtime_error("pauli parse: bad qubit in '" + tok + "'");
    }
    if (used != tok.size() - 1) {
      throw std::runtime_error("pauli parse: bad qubit in '" + tok + "'");
    }
    t.letters.emplace_back(static_cast<uint32_t>(q), p);
  }
  t.canonicalize();
  return t;
}

void PauliSum::add(const PauliTerm& t) { terms.push_back(t); }

void PauliSum::add_scaled(const PauliTerm& t, std::complex<double> scale) {
  const std::complex<double> amp = t.amplitude() * scale;
  if (amp.real() != 0.0) {
    PauliTerm re;
    re.letters = t.letters;
    re.coeff = amp.real();
    re.canonicalize();
    terms.push_back(std::move(re));
  }
  if (amp.imag() != 0.0) {
    PauliTerm im;
    im.letters = t.letters;
    im.coeff = amp.imag();
    im.phase_pow = 1;
    im.canonicalize();
    terms.push_back(std::move(im));
  }
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

PauliSum& PauliSum::operator*=(double real_scale) {
  for (auto& t : terms) {
    t.coeff *= real_scale;
    t.canonicalize();
  }
  return *this;
}

void PauliSum::canonicalize() {
  std::map<std::vector<std::pair<uint32_t, Pauli>>, std::complex<double>> acc;
  for (const auto& t : terms) acc[t.letters] += t.amplitude();
  std::vector<PauliTerm> merged;
  merged.reserve(acc.size());
  for (const auto& [letters, amp] : acc) {
    if (amp.real() != 0.0) {
      PauliTerm t;
      t.letters = letters;
      t.coeff = amp.real();
      t.canonicalize();
      merged.push_back(std::move(t));
    }
    if (amp.imag() != 0.0) {
      PauliTerm t;
      t.letters = letters;
      t.coeff = amp.imag();
      t.phase_pow = 1;
      t.canonicalize();
      merged.push_back(std::move(t));
    }
  }
  terms = std::move(merged);
}

bool PauliSum::is_hermitian(double tol) const {
  return approx_equal(*this, sum_adjoint(*this), tol);
}

uint32_t PauliSum::max_weight() const {
  uint32_t w = 0;
  for (const auto& t : terms) w = std::max(w, t.weight());
  return w;
}

uint32_t PauliSum::max_qubit() const {
  uint32_t q = 0;
  for (const auto& t : terms) q = std::max(q, t.max_qubit());
  return q;
}

std::vector<uint32_t> PauliSum::support() const {
  std::vector<uint32_t> q;
  for (const auto& t : terms) {
    for (const auto& [qubit, p] : t.letters) q.push_back(qubit);
  }
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

std::string PauliSum::to_string() const {
  std::string out;
  for (const auto& t : terms) {
    out += t.to_string();
    out += '\n';
  }
  return out;
}

PauliSum sum_mul(const PauliSum& a, const PauliSum& b) {
  PauliSum r;
  r.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) r.terms.push_back(pauli_mul(ta, tb));
  }
  r.canonicalize();
  return r;
}

PauliSum sum_mul(const PauliSum& a, const PauliTerm& b) {
  PauliSum r;
  r.terms.reserve(a.terms.size());
  for (const auto& ta : a.terms) r.terms.push_back(pauli_mul(ta, b));
  r.canonicalize();
  return r;
}

PauliSum sum_mul(const PauliTerm& a, const PauliSum& b) {
  PauliSum r;
  r.terms.reserve(b.terms.size());
  for (const auto& tb : b.terms) r.terms.push_back(pauli_mul(a, tb));
  r.canonicalize();
  return r;
}

PauliSum sum_adjoint(const PauliSum& a) {
  PauliSum r;
  r.terms.reserve(a.terms.size());
  for (const auto& t : a.terms) r.terms.push_back(pauli_adjoint(t));
  r.canonicalize();
  return r;
}

bool sum_commute(const PauliSum& a, const PauliSum& b, double tol) {
  PauliSum ab = sum_mul(a, b);
  PauliSum ba = sum_mul(b, a);
  return approx_equal(ab, ba, tol);
}

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol) {
  std::map<std::vector<std::pair<uint32_t, Pauli>>, std::complex<double>> acc;
  for (const auto& t : a.terms) acc[t.letters] += t.amplitude();
  for (const auto& t : b.terms) acc[t.letters] -= t.amplitude();
  for (const auto& [letters, amp] : acc) {
    if (std::abs(amp) > tol) return false;
  }
  return true;
}

PauliSum parse_pauli_sum(const std::string& text) {
  PauliSum s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    s.terms.push_back(parse_pauli_term(line));
  }
  s.canonicalize();
  return s;
}

}  // namespace auxenc
