#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "auxenc/models.hpp"

namespace auxenc {

enum class CliCommand { Encode, Verify, Depth, Simulate, Sweep };

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCapExceeded = 4;

struct RunConfig {
  CliCommand command = CliCommand::Encode;
  std::string model_path;  // exactly one of model_path / generator
  std::string generator;   // kind:key=value,... (see model_from_generator)
  uint64_t seed = 1;
  double tau = 0.1;
  uint32_t steps = 5;
  uint32_t cap_qubits = 20;
  std::vector<uint32_t> sweep_sizes = {8, 16, 32, 64};
  std::vector<uint64_t> sweep_seeds;  // optional, parallel to sweep_sizes
  // Negative control: flips one recorded stabilizer sign before the
  // equivalence checks, which must then fail.
  bool corrupt_sign = false;
};

struct RunOutput {
  int exit_code = kExitOk;
  std::string report;  // printed to stdout by the tool
  // Files the command produced, as (name, bytes) in a fixed order; the
  // tool writes them under --out.
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Builds a model from `kind:key=value,...`. Kinds and keys:
//   hopping        N, d, seed, t        hopping on a random d-regular graph
//   fermi_hubbard  N, d, seed, t, V     adds a density term per edge
//   sparse_syk     N, d, seed, J        quartic terms over 2N Majoranas
// Couplings default to 1, seed to 1. Malformed specs throw
// std::invalid_argument; infeasible parameters propagate the generator's
// std::runtime_error. The override variant replaces the spec's N and
// seed, which is how the sweep reuses one spec across sizes.
FermionModel model_from_generator(const std::string& spec);
FermionModel model_from_generator(const std::string& spec, uint32_t n_override,
                                  uint64_t seed_override);

// Runs one command. Documented failure classes come back through
// exit_code (with an `error: ...` report line), not as exceptions.
RunOutput run_command(const RunConfig& config);

}  // namespace auxenc
