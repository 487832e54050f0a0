#include <benchmark/benchmark.h>

#include <vector>

#include "auxenc/circuit.hpp"
#include "auxenc/encode.hpp"
#include "auxenc/models.hpp"
#include "auxenc/pauli.hpp"
#include "auxenc/rng.hpp"
#include "auxenc/sim.hpp"

namespace {

using namespace auxenc;

PauliTerm random_term(Rng& rng, uint32_t n_qubits, uint32_t weight) {
  PauliTerm t;
  t.coeff = 1.0;
  std::vector<uint32_t> qs;
  while (qs.size() < weight) {
    const uint32_t q = rng.index(n_qubits);
    bool dup = false;
    for (uint32_t seen : qs) dup |= seen == q;
    if (!dup) qs.push_back(q);
  }
  for (uint32_t q : qs) {
    t.letters.emplace_back(q, static_cast<Pauli>(1 + rng.index(3)));
  }
  t.canonicalize();
  return t;
}

void BM_pauli_mul(benchmark::State& state) {
  Rng rng(7);
  std::vector<PauliTerm> words;
  for (int i = 0; i < 256; ++i) words.push_back(random_term(rng, 24, 8));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pauli_mul(words[i & 255], words[(i + 1) & 255]));
    ++i;
  }
}
BENCHMARK(BM_pauli_mul);

void BM_apply_pauli_term(benchmark::State& state) {
  Rng rng(11);
  const auto n = static_cast<uint32_t>(state.range(0));
  StateVector psi = StateVector::zero_state(n);
  for (auto& a : psi.amp) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  psi.normalize();
  const PauliTerm t = random_term(rng, n, 8);
  for (auto _ : state) {
    apply_pauli_term(psi, t);
    benchmark::DoNotOptimize(psi.amp.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(psi.dim()));
}
BENCHMARK(BM_apply_pauli_term)->Arg(16)->Arg(20);

void BM_edge_color(benchmark::State& state) {
  const auto n = static_cast<uint32_t>(state.range(0));
  const InteractionGraph g = random_regular_graph(n, 5, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(edge_color(g));
  }
}
BENCHMARK(BM_edge_color)->Arg(64)->Arg(256);

void BM_encode_model(benchmark::State& state) {
  const auto n = static_cast<uint32_t>(state.range(0));
  const FermionModel m = fermi_hubbard_model(random_regular_graph(n, 3, 1),
                                             1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_model(m));
  }
}
BENCHMARK(BM_encode_model)->Arg(32)->Arg(64);

void BM_trotter_step_schedule(benchmark::State& state) {
  const auto n = static_cast<uint32_t>(state.range(0));
  const EncodedModel em = encode_model(
      fermi_hubbard_model(random_regular_graph(n, 3, 1), 1.0, 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trotter_step_schedule(em, 0.1));
  }
}
BENCHMARK(BM_trotter_step_schedule)->Arg(32)->Arg(64);

void BM_ordered_prep_schedule(benchmark::State& state) {
  const auto n = static_cast<uint32_t>(state.range(0));
  const ModeLayout layout{n, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordered_prep_schedule(layout, 1));
  }
}
BENCHMARK(BM_ordered_prep_schedule)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
