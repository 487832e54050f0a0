#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "auxenc/pauli.hpp"
#include "oracle.hpp"

using namespace auxenc;
using auxenc::testing::dense_sum;
using auxenc::testing::dense_term;

TEST_CASE("single_qubit_products_match_dense_matrices") {
  const Pauli letters[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (Pauli a : letters) {
    for (Pauli b : letters) {
      const PauliTerm ta = PauliTerm::single(0, a);
      const PauliTerm tb = PauliTerm::single(0, b);
      const Eigen::MatrixXcd lhs = dense_term(pauli_mul(ta, tb), 1);
      const Eigen::MatrixXcd rhs = dense_term(ta, 1) * dense_term(tb, 1);
      REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("single_qubit_product_table") {
  auto prod = [](Pauli a, Pauli b) {
    return pauli_mul(PauliTerm::single(0, a), PauliTerm::single(0, b)).to_string();
  };
  CHECK(prod(Pauli::X, Pauli::Y) == "+i1 Z0");
  CHECK(prod(Pauli::Y, Pauli::X) == "-i1 Z0");
  CHECK(prod(Pauli::Y, Pauli::Z) == "+i1 X0");
  CHECK(prod(Pauli::Z, Pauli::Y) == "-i1 X0");
  CHECK(prod(Pauli::Z, Pauli::X) == "+i1 Y0");
  CHECK(prod(Pauli::X, Pauli::Z) == "-i1 Y0");
  CHECK(prod(Pauli::X, Pauli::X) == "+1");
  CHECK(prod(Pauli::Y, Pauli::Y) == "+1");
  CHECK(prod(Pauli::Z, Pauli::Z) == "+1");
}

TEST_CASE("string_products_match_dense_matrices") {
  std::mt19937 rng(12345);
  auto random_term = [&rng]() {
    PauliTerm t;
    std::uniform_int_distribution<int> letter(0, 3);
    for (uint32_t q = 0; q < 3; ++q) {
      const int pick = letter(rng);
      if (pick > 0) t.letters.emplace_back(q, static_cast<Pauli>(pick));
    }
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    t.coeff = c(rng);
    t.phase_pow = letter(rng);
    t.canonicalize();
    return t;
  };
  for (int rep = 0; rep < 50; ++rep) {
    const PauliTerm a = random_term();
    const PauliTerm b = random_term();
    const Eigen::MatrixXcd lhs = dense_term(pauli_mul(a, b), 3);
    const Eigen::MatrixXcd rhs = dense_term(a, 3) * dense_term(b, 3);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    const bool comm = pauli_commute(a, b);
    const Eigen::MatrixXcd commutator =
        dense_term(a, 3) * dense_term(b, 3) - dense_term(b, 3) * dense_term(a, 3);
    REQUIRE((commutator.cwiseAbs().maxCoeff() < 1e-12) == comm);
  }
}

TEST_CASE("canonical_form_folds_signs") {
  PauliTerm t = PauliTerm::single(4, Pauli::Y, -0.5);
  CHECK(t.coeff == 0.5);
  CHECK(t.phase_pow == 2);
  CHECK(t.to_string() == "-0.5 Y4");
  t.phase_pow += 1;  // -i after reduction
  t.canonicalize();
  CHECK(t.to_string() == "-i0.5 Y4");
  CHECK_FALSE(t.is_hermitian());
  CHECK(pauli_adjoint(t).to_string() == "+i0.5 Y4");
}

TEST_CASE("term_text_round_trip") {
  for (const char* text :
       {"+0.5 X0 X4", "-i0.5 Y1", "+1", "-2.25 Z3", "+i1 X0 Y1 Z2"}) {
    CHECK(parse_pauli_term(text).to_string() == text);
  }
  CHECK(parse_pauli_term("0.5 X0").to_string() == "+0.5 X0");
  CHECK(parse_pauli_term("-i Y1").to_string() == "-i1 Y1");
  CHECK(parse_pauli_term("+1 X4 X0").to_string() == "+1 X0 X4");
  CHECK_THROWS(parse_pauli_term(""));
  CHECK_THROWS(parse_pauli_term("+1 Q0"));
  CHECK_THROWS(parse_pauli_term("+1 X0 X0"));
  CHECK_THROWS(parse_pauli_term("+1x X0"));
  CHECK_THROWS(parse_pauli_term("+1 X0junk"));
}

TEST_CASE("sum_merges_by_letter_pattern") {
  PauliSum s;
  s.add(parse_pauli_term("+0.5 X0"));
  s.add(parse_pauli_term("+0.25 X0"));
  s.add(parse_pauli_term("+0.75 Z1"));
  s.add(parse_pauli_term("-0.75 Z1"));
  s.canonicalize();
  REQUIRE(s.terms.size() == 1);
  CHECK(s.terms[0].to_string() == "+0.75 X0");

  PauliSum mixed;
  mixed.add(parse_pauli_term("+1 Y2"));
  mixed.add(parse_pauli_term("+i0.5 Y2"));
  mixed.canonicalize();
  REQUIRE(mixed.terms.size() == 2);
  CHECK(mixed.terms[0].to_string() == "+1 Y2");
  CHECK(mixed.terms[1].to_string() == "+i0.5 Y2");
  CHECK_FALSE(mixed.is_hermitian());
}

TEST_CASE("sum_text_round_trip") {
  // Canonical order sorts by letter pattern with the identity first.
  const std::string text = "+1\n+0.5 X0 X4\n-i0.5 Y1\n";
  PauliSum s = parse_pauli_sum("-i0.5 Y1\n+1\n+0.5 X0 X4\n");
  CHECK(s.to_string() == text);
  CHECK(parse_pauli_sum(text).to_string() == text);
  PauliSum with_comments = parse_pauli_sum("# header\n\n+2 Z0\n");
  REQUIRE(with_comments.terms.size() == 1);
  CHECK(with_comments.terms[0].to_string() == "+2 Z0");
}

TEST_CASE("sum_products_match_dense_matrices") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> letter(0, 3);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  auto random_sum = [&]() {
    PauliSum s;
    for (int t = 0; t < 3; ++t) {
      PauliTerm term;
      for (uint32_t q = 0; q < 3; ++q) {
        const int pick = letter(rng);
        if (pick > 0) term.letters.emplace_back(q, static_cast<Pauli>(pick));
      }
      term.coeff = c(rng);
      term.phase_pow = letter(rng);
      term.canonicalize();
      s.add(term);
    }
    s.canonicalize();
    return s;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const PauliSum a = random_sum();
    const PauliSum b = random_sum();
    const Eigen::MatrixXcd lhs = dense_sum(sum_mul(a, b), 3);
    const Eigen::MatrixXcd rhs = dense_sum(a, 3) * dense_sum(b, 3);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXcd adj = dense_sum(sum_adjoint(a), 3);
    REQUIRE((adj - dense_sum(a, 3).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hermiticity_detection") {
  PauliSum h = parse_pauli_sum("+0.5 X0 X1\n+0.5 Y0 Y1\n-1 Z0\n");
  CHECK(h.is_hermitian());
  PauliSum g = parse_pauli_sum("+i0.5 X0\n");
  CHECK_FALSE(g.is_hermitian());
  // i X0 - i X0^dag style combination is anti-Hermitian overall.
  PauliSum mixed = parse_pauli_sum("+i0.5 X0\n-i0.25 Z1\n");
  CHECK_FALSE(mixed.is_hermitian());
}

TEST_CASE("support_and_weight_queries") {
  const PauliSum s = parse_pauli_sum("+1 X0 Z5\n+0.5 Y2\n");
  CHECK(s.max_weight() == 2);
  CHECK(s.max_qubit() == 5);
  CHECK(s.support() == std::vector<uint32_t>{0, 2, 5});
  CHECK(parse_pauli_term("+1").weight() == 0);
}

TEST_CASE("exact_cancellation_drops_terms") {
  PauliSum s;
  s.add(parse_pauli_term("+0.5 X0"));
  s.add(parse_pauli_term("-0.5 X0"));
  s.canonicalize();
  CHECK(s.terms.empty());
  CHECK(approx_equal(s, PauliSum{}, 0.0));
}
