#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "auxenc/cli.hpp"

namespace {

int write_artifacts(const std::string& out_dir, const auxenc::RunOutput& out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory '%s': %s\n",
                 out_dir.c_str(), ec.message().c_str());
    return auxenc::kExitParseError;
  }
  for (const auto& [name, bytes] : out.artifacts) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << bytes;
    if (!f) {
      std::fprintf(stderr, "error: cannot write '%s'\n", path.string().c_str());
      return auxenc::kExitParseError;
    }
  }
  return auxenc::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"auxiliary-fermion stabilizer encoding toolkit"};
  app.require_subcommand(1);

  auxenc::RunConfig cfg;
  std::string out_dir;
  std::vector<uint32_t> sizes;
  std::vector<uint64_t> seeds;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "model file to read");
    sub->add_option("--gen", cfg.generator,
                    "generator spec kind:key=value,... (kinds hopping, "
                    "fermi_hubbard, sparse_syk)");
    sub->add_option("--seed", cfg.seed, "seed for sampling and measurements");
    sub->add_option("--tau", cfg.tau, "Trotter step angle");
    sub->add_option("--steps", cfg.steps, "Trotter step count");
    sub->add_option("--cap-qubits", cfg.cap_qubits,
                    "joint register size limit");
    sub->add_option("--out", out_dir, "directory for CSV and dump files");
  };

  CLI::App* enc =
      app.add_subcommand("encode", "transform a model and audit Pauli weights");
  CLI::App* ver = app.add_subcommand(
      "verify", "run the algebraic and numeric check battery");
  CLI::App* dep = app.add_subcommand(
      "depth", "print the depth and ancilla resource table");
  CLI::App* sim = app.add_subcommand(
      "simulate", "run gate schedules against the operator reference");
  CLI::App* swp =
      app.add_subcommand("sweep", "depth report across register sizes");
  for (CLI::App* sub : {enc, ver, dep, sim, swp}) add_common(sub);
  ver->add_flag("--corrupt-sign", cfg.corrupt_sign,
                "negative control: flip one recorded stabilizer sign");
  swp->add_option("--n-list", sizes, "site counts to sweep")->delimiter(',');
  swp->add_option("--seed-list", seeds, "per-size seeds")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? auxenc::kExitOk : auxenc::kExitParseError;
  }

  if (enc->parsed()) cfg.command = auxenc::CliCommand::Encode;
  if (ver->parsed()) cfg.command = auxenc::CliCommand::Verify;
  if (dep->parsed()) cfg.command = auxenc::CliCommand::Depth;
  if (sim->parsed()) cfg.command = auxenc::CliCommand::Simulate;
  if (swp->parsed()) cfg.command = auxenc::CliCommand::Sweep;
  if (!sizes.empty()) cfg.sweep_sizes = sizes;
  if (!seeds.empty()) cfg.sweep_seeds = seeds;

  const auxenc::RunOutput out = auxenc::run_command(cfg);
  std::fputs(out.report.c_str(), stdout);
  if (!out_dir.empty()) {
    const int rc = write_artifacts(out_dir, out);
    if (rc != auxenc::kExitOk) return rc;
  }
  return out.exit_code;
}
