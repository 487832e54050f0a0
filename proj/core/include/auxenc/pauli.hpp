#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace auxenc {

// Single-qubit Pauli letters. The numeric values make products cheap:
// for p != q the product letter is 6-p-q, and the phase is i for the
// cyclic order X->Y->Z->X and -i otherwise.
enum class Pauli : uint8_t { X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

// A scalar multiple of a Pauli string, stored as coeff * i^phase_pow * P
// with coeff >= 0, phase_pow in {0,1,2,3} and letters sorted by qubit.
// The text form is e.g. "+0.5 X0 X4", "-i0.5 Y1", "+1" (identity).
struct PauliTerm {
  std::vector<std::pair<uint32_t, Pauli>> letters;
  int phase_pow = 0;
  double coeff = 1.0;

  static PauliTerm identity(double c = 1.0);
  static PauliTerm single(uint32_t qubit, Pauli p, double c = 1.0);

  uint32_t weight() const { return static_cast<uint32_t>(letters.size()); }
  bool is_identity_string() const { return letters.empty(); }
  // Hermitian iff the phase unit is real (+1 or -1).
  bool is_hermitian() const { return phase_pow % 2 == 0; }
  std::complex<double> amplitude() const;
  std::vector<uint32_t> support() const;
  uint32_t max_qubit() const;  // 0 for the identity string

  void canonicalize();  // sort letters, fold a negative coeff into the phase
  std::string to_string() const;
};

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b);
PauliTerm pauli_adjoint(const PauliTerm& a);
bool pauli_commute(const PauliTerm& a, const PauliTerm& b);
// True when both terms act on the same letter pattern (scalars ignored).
bool same_letters(const PauliTerm& a, const PauliTerm& b);
PauliTerm parse_pauli_term(const std::string& text);

// A real-linear combination of Pauli strings. Terms with a common letter
// pattern are merged by canonicalize(); a complex net amplitude re-emits
// as one real-phase and one imaginary-phase term.
struct PauliSum {
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(PauliTerm t) { terms.push_back(std::move(t)); }

  void add(const PauliTerm& t);
  void add_scaled(const PauliTerm& t, std::complex<double> scale);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(double real_scale);

  void canonicalize();
  bool is_hermitian(double tol = 1e-12) const;
  uint32_t max_weight() const;
  uint32_t max_qubit() const;
  std::vector<uint32_t> support() const;
  std::string to_string() const;  // one term per line
};

PauliSum sum_mul(const PauliSum& a, const PauliSum& b);
PauliSum sum_mul(const PauliSum& a, const PauliTerm& b);
PauliSum sum_mul(const PauliTerm& a, const PauliSum& b);
PauliSum sum_adjoint(const PauliSum& a);
bool sum_commute(const PauliSum& a, const PauliSum& b, double tol = 1e-12);
bool approx_equal(const PauliSum& a, const PauliSum& b, double tol = 1e-12);
PauliSum parse_pauli_sum(const std::string& text);

}  // namespace auxenc
