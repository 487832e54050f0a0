#include "auxenc/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "auxenc/circuit.hpp"
#include "auxenc/encode.hpp"
#include "auxenc/rng.hpp"
#include "auxenc/sim.hpp"

namespace auxenc {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint32_t ceil_log2_u64(uint64_t v) {
  uint32_t bits = 0;
  while ((uint64_t{1} << bits) < v) ++bits;
  return bits;
}

struct GenSpec {
  std::string kind;
  std::map<std::string, double> keys;
};

GenSpec parse_gen_spec(const std::string& spec) {
  GenSpec g;
  const size_t colon = spec.find(':');
  g.kind = spec.substr(0, colon);
  if (g.kind.empty()) {
    throw std::invalid_argument("generator spec needs a kind before ':'");
  }
  if (colon == std::string::npos) return g;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("generator entry '" + item +
                                  "' is not key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double v = 0.0;
    size_t used = 0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != val.size()) {
      throw std::invalid_argument("generator value '" + val +
                                  "' is not a number");
    }
    if (!g.keys.emplace(key, v).second) {
      throw std::invalid_argument("duplicate generator key '" + key + "'");
    }
  }
  return g;
}

FermionModel build_generator_model(GenSpec g) {
  auto take = [&g](const char* key, double dflt) {
    const auto it = g.keys.find(key);
    if (it == g.keys.end()) return dflt;
    const double v = it->second;
    g.keys.erase(it);
    return v;
  };
  auto take_u32 = [&take](const char* key, double dflt) {
    const double v = take(key, dflt);
    if (v < 0.0 || v != std::floor(v) || v > 4294967295.0) {
      throw std::invalid_argument(std::string("generator key '") + key +
                                  "' needs a small nonnegative integer");
    }
    return static_cast<uint32_t>(v);
  };
  auto finish = [&g]() {
    if (!g.keys.empty()) {
      throw std::invalid_argument("unknown generator key '" +
                                  g.keys.begin()->first + "'");
    }
  };

  if (g.kind == "hopping" || g.kind == "fermi_hubbard") {
    const uint32_t n = take_u32("N", 0);
    const uint32_t d = take_u32("d", 0);
    const uint64_t seed = take_u32("seed", 1);
    const double t = take("t", 1.0);
    if (n == 0 || d == 0) {
      throw std::invalid_argument("generator needs N and d");
    }
    if (g.kind == "hopping") {
      finish();
      return hopping_model(random_regular_graph(n, d, seed), t);
    }
    const double v = take("V", 1.0);
    finish();
    return fermi_hubbard_model(random_regular_graph(n, d, seed), t, v);
  }
  if (g.kind == "sparse_syk") {
    const uint32_t n = take_u32("N", 0);
    const uint32_t d = take_u32("d", 0);
    const uint64_t seed = take_u32("seed", 1);
    const double j = take("J", 1.0);
    if (n == 0 || d == 0) {
      throw std::invalid_argument("generator needs N and d");
    }
    finish();
    return sparse_syk_model(2 * n, d, seed, j);
  }
  throw std::invalid_argument("unknown generator kind '" + g.kind + "'");
}

// Loads the config's model source, classifying failures into the parse
// and infeasible exit codes. Returns false with res filled on failure.
bool source_model(const RunConfig& c, FermionModel& out, RunOutput& res) {
  const bool has_file = !c.model_path.empty();
  const bool has_gen = !c.generator.empty();
  if (has_file == has_gen) {
    res.report +=
        "error: exactly one of a model file and a generator spec is "
        "required\n";
    res.exit_code = kExitParseError;
    return false;
  }
  if (has_file) {
    std::ifstream in(c.model_path, std::ios::binary);
    if (!in) {
      res.report += "error: cannot read model file '" + c.model_path + "'\n";
      res.exit_code = kExitParseError;
      return false;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      out = parse_model(text.str());
    } catch (const std::exception& e) {
      res.report += std::string("error: ") + e.what() + "\n";
      res.exit_code = kExitParseError;
      return false;
    }
    return true;
  }
  try {
    out = model_from_generator(c.generator);
  } catch (const std::invalid_argument& e) {
    res.report += std::string("error: ") + e.what() + "\n";
    res.exit_code = kExitParseError;
    return false;
  } catch (const std::exception& e) {
    res.report += std::string("error: ") + e.what() + "\n";
    res.exit_code = kExitInfeasible;
    return false;
  }
  return true;
}

bool encode_step(const FermionModel& m, EncodedModel& em, RunOutput& res) {
  try {
    em = encode_model(m);
  } catch (const std::exception& e) {
    res.report += std::string("error: infeasible encoding: ") + e.what() + "\n";
    res.exit_code = kExitInfeasible;
    return false;
  }
  return true;
}

void header_lines(RunOutput& res, const char* cmd, const FermionModel& m,
                  const EncodedModel& em) {
  res.report += std::string("command ") + cmd + "\n";
  res.report += std::string("model ") + model_kind_name(m.kind) + " sites " +
                std::to_string(m.n_sites) + " terms " +
                std::to_string(m.terms.size()) + "\n";
  res.report += "graph edges " + std::to_string(em.plan.graph.edges.size()) +
                " chi " + std::to_string(em.plan.coloring.n_colors) +
                " registers " + std::to_string(em.plan.n_registers) + "\n";
}

struct CheckSet {
  std::string lines;
  uint32_t total = 0;
  uint32_t passed = 0;

  void add(const std::string& name, double value, const std::string& threshold,
           bool pass) {
    lines += "CHECK " + name + " " + fmt_g(value) + " " + threshold +
             (pass ? " PASS\n" : " FAIL\n");
    ++total;
    if (pass) ++passed;
  }
};

void finish_checks(RunOutput& res, const CheckSet& checks) {
  res.report += checks.lines;
  const bool ok = checks.passed == checks.total;
  res.report += std::string("RESULT ") + (ok ? "PASS" : "FAIL") + " (" +
                std::to_string(checks.passed) + "/" +
                std::to_string(checks.total) + ")\n";
  if (!ok) res.exit_code = kExitCheckFailed;
}

StateVector random_phys_state(uint32_t n_qubits, uint64_t seed) {
  Rng rng(Rng::mix(seed, 0x706879737374617eULL));
  StateVector psi = StateVector::zero_state(n_qubits);
  for (auto& a : psi.amp) {
    a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  }
  psi.normalize();
  return psi;
}

double max_stabilizer_deviation(const EncodedModel& em, const StateVector& psi,
                                const std::vector<int>& signs) {
  double dev = 0.0;
  for (uint32_t e = 0; e < em.plan.edges.size(); ++e) {
    const auto ev = expectation(psi, signed_stabilizer(em, e, signs));
    dev = std::max(dev, std::abs(ev - 1.0));
  }
  return dev;
}

std::vector<PauliSum> layer_sums(const std::vector<std::vector<PauliSum>>& ops) {
  std::vector<PauliSum> out;
  out.reserve(ops.size());
  for (const auto& layer : ops) {
    PauliSum s;
    for (const auto& op : layer) s += op;
    s.canonicalize();
    out.push_back(std::move(s));
  }
  return out;
}

RunOutput run_encode(const RunConfig& c) {
  RunOutput res;
  FermionModel m;
  if (!source_model(c, m, res)) return res;
  EncodedModel em;
  if (!encode_step(m, em, res)) return res;
  header_lines(res, "encode", m, em);

  static constexpr std::array<const char*, 5> kSlugs = {"hop", "nn", "four",
                                                        "syk", "even"};
  std::array<uint32_t, 5> max_w{};
  std::array<bool, 5> seen{};
  uint32_t max_weight = 0;
  for (size_t i = 0; i < em.terms.size(); ++i) {
    const auto k = static_cast<size_t>(m.terms[i].kind);
    seen[k] = true;
    max_w[k] = std::max(max_w[k], em.terms[i].weight);
    max_weight = std::max(max_weight, em.terms[i].weight);
  }
  std::string summary = "chi=" + std::to_string(em.plan.coloring.n_colors) +
                        " nu=" + std::to_string(em.plan.n_registers);
  for (size_t k = 0; k < kSlugs.size(); ++k) {
    if (seen[k]) {
      summary += std::string(" max_w_") + kSlugs[k] + "=" +
                 std::to_string(max_w[k]);
    }
  }
  res.report += summary + "\n";
  res.report += "encoded terms " + std::to_string(em.terms.size()) +
                " layers " + std::to_string(em.layers.size()) +
                " max weight " + std::to_string(max_weight) + "\n";

  const WeightAudit audit = audit_weights(em);
  res.report += std::string("weights within tight bounds: ") +
                (audit.within_tight ? "yes" : "no") + "\n";
  res.report += std::string("hopping weights exact: ") +
                (audit.hopping_exact ? "yes" : "no") + "\n";

  res.artifacts.emplace_back("encoded.txt", encoded_dump(em));
  std::string csv = "label,weight,tight_bound,published_bound\n";
  for (const auto& row : audit.rows) {
    csv += row.label + "," + std::to_string(row.weight) + "," +
           std::to_string(row.tight_bound) + "," +
           std::to_string(row.published_bound) + "\n";
  }
  res.artifacts.emplace_back("weights.csv", csv);
  return res;
}

RunOutput run_verify(const RunConfig& c) {
  RunOutput res;
  FermionModel m;
  if (!source_model(c, m, res)) return res;
  EncodedModel em;
  if (!encode_step(m, em, res)) return res;
  header_lines(res, "verify", m, em);

  const uint32_t n = em.layout.total_qubits();
  const uint32_t cap = std::min<uint32_t>(c.cap_qubits, 20);
  if (n > cap) {
    res.report += "error: cap exceeded: joint register needs " +
                  std::to_string(n) + " qubits, cap " + std::to_string(cap) +
                  "\n";
    res.exit_code = kExitCapExceeded;
    return res;
  }
  res.report += "tau " + fmt_g(c.tau) + " steps " + std::to_string(c.steps) +
                " seed " + std::to_string(c.seed) + "\n";

  CheckSet checks;
  const PrepResult oracle = prepare_aux_oracle(em.layout, em.plan);
  const PrepResult measured = prepare_aux_measured(em.layout, em.plan, c.seed);
  const double dev_o = max_stabilizer_deviation(em, oracle.state, oracle.signs);
  const double dev_m =
      max_stabilizer_deviation(em, measured.state, measured.signs);
  checks.add("stabilizer_oracle", dev_o, "1e-10", dev_o <= 1e-10);
  checks.add("stabilizer_measured", dev_m, "1e-10", dev_m <= 1e-10);

  // The joint codespace of E independent stabilizers has dimension
  // 2^(n-E); the projector trace picks that integer out of the expansion.
  {
    const PauliSum proj = codespace_projector(em, measured.signs);
    double tr = 0.0;
    for (const auto& t : proj.terms) {
      if (t.letters.empty()) tr += t.amplitude().real();
    }
    const double rank = tr * std::pow(2.0, static_cast<double>(n));
    const double expected = std::pow(
        2.0, static_cast<double>(n) - static_cast<double>(em.plan.edges.size()));
    checks.add("codespace_rank", rank, fmt_g(expected),
               std::abs(rank - expected) < 0.5);
  }

  PrepResult record = measured;
  if (c.corrupt_sign && !record.signs.empty()) {
    record.signs[0] = -record.signs[0];
    res.report += "corrupt-sign control: flipped the sign of edge 0\n";
  }
  const StateVector psi_phys = random_phys_state(m.n_sites, c.seed);
  const EquivalenceReport eq =
      equivalence_check(em, record, psi_phys, c.tau, c.steps);
  const std::string fid_thr = fmt_g(1.0 - 1e-10);
  checks.add("term_equivalence", eq.per_term_fidelity, fid_thr,
             eq.per_term_fidelity >= 1.0 - 1e-10);
  checks.add("trotter_equivalence", eq.full_fidelity, fid_thr,
             eq.full_fidelity >= 1.0 - 1e-10);
  checks.add("aux_invariance", eq.aux_drift, "1e-08", eq.aux_drift <= 1e-8);

  {
    const auto phys = layer_sums(physical_layer_terms(em, false));
    const auto enc = layer_sums(encoded_layer_terms(em, measured.signs));
    const double lam_phys = commutator_lambda(phys, m.n_sites);
    const double lam_enc = commutator_lambda_projected(
        enc, codespace_projector(em, measured.signs), n);
    res.report += "lambda_physical " + fmt_g(lam_phys) + "\n";
    res.report += "lambda_encoded " + fmt_g(lam_enc) + "\n";
    checks.add("lambda_invariance", std::abs(lam_enc - lam_phys), "1e-08",
               std::abs(lam_enc - lam_phys) <= 1e-8);
  }

  if (c.steps > 0) {
    const double horizon = c.tau * c.steps;
    const auto phys_layers = physical_layer_terms(em, false);
    PauliSum h_phys;
    for (const auto& layer : phys_layers) {
      for (const auto& op : layer) h_phys += op;
    }
    h_phys.canonicalize();
    const StateVector exact = exact_evolve(h_phys, horizon, psi_phys);
    std::string csv = "M,error\n";
    std::vector<double> lx, ly;
    double max_err = 0.0;
    for (uint32_t steps : {4u, 8u, 16u, 32u}) {
      const StateVector approx =
          trotter_evolve_layers(phys_layers, horizon / steps, steps, psi_phys);
      const double f = fidelity(approx, exact);
      const double err = std::sqrt(std::max(0.0, 2.0 - 2.0 * f));
      csv += std::to_string(steps) + "," + fmt_g(err) + "\n";
      if (err > 1e-6) {
        lx.push_back(std::log(static_cast<double>(steps)));
        ly.push_back(std::log(err));
      }
      max_err = std::max(max_err, err);
    }
    res.artifacts.emplace_back("scaling.csv", csv);
    // The error metric sqrt(2 - 2|<a|b>|) turns state roundoff near 1e-15
    // into values around 1e-8, so the exactness cut sits well above that
    // floor and well below any genuine first-order Trotter error here.
    if (max_err < 1e-6) {
      checks.add("trotter_exact", max_err, "1e-06", true);
    } else if (lx.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      const double nfit = static_cast<double>(lx.size());
      const double slope = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
      checks.add("trotter_slope", slope, "-1+-0.2",
                 std::abs(slope + 1.0) <= 0.2);
    } else {
      checks.add("trotter_slope", 0.0, "-1+-0.2", false);
    }
  } else {
    res.report += "trotter scaling skipped (steps 0)\n";
  }

  finish_checks(res, checks);
  return res;
}

RunOutput run_depth(const RunConfig& c) {
  RunOutput res;
  FermionModel m;
  if (!source_model(c, m, res)) return res;
  EncodedModel em;
  if (!encode_step(m, em, res)) return res;
  header_lines(res, "depth", m, em);
  const DepthReport r = full_depth_report(em);
  res.report += render_depth_table(r);
  res.report += "total depth at " + std::to_string(c.steps) + " steps: " +
                fmt_g(r.total_depth(c.steps)) + "\n";
  res.artifacts.emplace_back("depth.csv", render_depth_csv(r));
  return res;
}

RunOutput run_simulate(const RunConfig& c) {
  RunOutput res;
  FermionModel m;
  if (!source_model(c, m, res)) return res;
  EncodedModel em;
  if (!encode_step(m, em, res)) return res;
  header_lines(res, "simulate", m, em);

  const uint32_t n = em.layout.total_qubits();
  const uint32_t cap = std::min<uint32_t>(c.cap_qubits, 26);
  if (n > cap) {
    res.report += "error: cap exceeded: joint register needs " +
                  std::to_string(n) + " qubits, cap " + std::to_string(cap) +
                  "\n";
    res.exit_code = kExitCapExceeded;
    return res;
  }
  res.report += "tau " + fmt_g(c.tau) + " steps " + std::to_string(c.steps) +
                " seed " + std::to_string(c.seed) + "\n";

  const PrepResult prep = prepare_aux_measured(em.layout, em.plan, c.seed);
  const StateVector psi_phys = random_phys_state(m.n_sites, c.seed);
  const StateVector joint = embed_physical(em.layout, prep.state, psi_phys);

  const GateSchedule step = trotter_step_schedule(em, c.tau, prep.signs);
  res.report += "step two-qubit depth " + std::to_string(step.depth()) +
                " layers " + std::to_string(step.total_layers()) + " gates " +
                std::to_string(step.gate_count()) + "\n";

  StateVector sched_state = joint;
  for (uint32_t s = 0; s < c.steps; ++s) {
    ScheduleRun run =
        simulate_schedule(step, sched_state, Rng::mix(c.seed, s + 1));
    sched_state = std::move(run.state);
  }
  const StateVector op_state = trotter_evolve(em, prep.signs, c.tau, c.steps, joint);

  CheckSet checks;
  const double f = fidelity(sched_state, op_state);
  checks.add("schedule_trotter_fidelity", f, fmt_g(1.0 - 1e-9),
             f >= 1.0 - 1e-9);
  const double drift = max_stabilizer_deviation(em, sched_state, prep.signs);
  checks.add("schedule_aux_drift", drift, "1e-08", drift <= 1e-8);

  std::string csv = "edge,tail,head,reg,color,sign,outcome\n";
  for (uint32_t e = 0; e < em.plan.edges.size(); ++e) {
    const OrientedEdge& oe = em.plan.edges[e];
    csv += std::to_string(e) + "," + std::to_string(oe.tail) + "," +
           std::to_string(oe.head) + "," + std::to_string(oe.reg) + "," +
           std::to_string(oe.color) + "," + std::to_string(prep.signs[e]) +
           "," + std::to_string(prep.outcomes[e]) + "\n";
  }
  res.artifacts.emplace_back("signs.csv", csv);

  finish_checks(res, checks);
  return res;
}

RunOutput run_sweep(const RunConfig& c) {
  RunOutput res;
  if (c.generator.empty() || !c.model_path.empty()) {
    res.report += "error: sweep needs a generator spec and no model file\n";
    res.exit_code = kExitParseError;
    return res;
  }
  if (c.sweep_sizes.empty()) {
    res.report += "error: sweep needs a size list\n";
    res.exit_code = kExitParseError;
    return res;
  }
  if (!c.sweep_seeds.empty() && c.sweep_seeds.size() != c.sweep_sizes.size()) {
    res.report += "error: seed list must match the size list\n";
    res.exit_code = kExitParseError;
    return res;
  }
  res.report += "command sweep\ngenerator " + c.generator + "\n";

  struct Row {
    uint32_t n = 0;
    uint32_t chi = 0;
    uint32_t regs = 0;
    double prep = 0.0;
    uint64_t step = 0;
    uint64_t ancillas = 0;
    uint32_t padded = 0;
  };
  std::vector<Row> rows;
  DepthReport last;
  for (size_t i = 0; i < c.sweep_sizes.size(); ++i) {
    const uint32_t size = c.sweep_sizes[i];
    const uint64_t seed = c.sweep_seeds.empty() ? c.seed : c.sweep_seeds[i];
    FermionModel m;
    EncodedModel em;
    try {
      m = model_from_generator(c.generator, size, seed);
    } catch (const std::invalid_argument& e) {
      res.report += std::string("error: ") + e.what() + "\n";
      res.exit_code = kExitParseError;
      return res;
    } catch (const std::exception& e) {
      res.report += std::string("error: ") + e.what() + "\n";
      res.exit_code = kExitInfeasible;
      return res;
    }
    if (!encode_step(m, em, res)) return res;
    const DepthReport r = full_depth_report(em);
    rows.push_back({size, em.plan.coloring.n_colors, em.plan.n_registers,
                    r.prep_depth, r.per_step_depth, r.ancilla_total,
                    r.padded_sites});
    last = r;
    res.report += "N " + std::to_string(size) + " seed " +
                  std::to_string(seed) + " chi " + std::to_string(rows.back().chi) +
                  " prep_depth " + fmt_g(r.prep_depth) +
                  " per_step_depth " + std::to_string(r.per_step_depth) +
                  " ancillas " + std::to_string(r.ancilla_total) + "\n";
  }

  bool constant = true;
  for (const Row& row : rows) constant &= row.step == rows.front().step;
  res.report += std::string("per_step_depth constant: ") +
                (constant ? "yes" : "no") + "\n";

  // prep_depth should land on a + b * ceil(log2 N) exactly; fit the line
  // from the first two distinct sizes and verify the rest.
  {
    std::vector<double> xs, ps;
    for (const Row& row : rows) {
      xs.push_back(static_cast<double>(ceil_log2_u64(row.n)));
      ps.push_back(row.prep);
    }
    size_t j = 1;
    while (j < xs.size() && xs[j] == xs[0]) ++j;
    bool affine = true;
    double a = ps[0], b = 0.0;
    if (j < xs.size()) {
      b = (ps[j] - ps[0]) / (xs[j] - xs[0]);
      a = ps[0] - b * xs[0];
    }
    for (size_t i = 0; i < xs.size(); ++i) {
      affine &= std::abs(ps[i] - (a + b * xs[i])) < 1e-9;
    }
    if (affine) {
      res.report += "prep_depth affine in log2 N: yes (prep_depth = " +
                    fmt_g(a) + " + " + fmt_g(b) + "*ceil(log2 N))\n";
    } else {
      res.report += "prep_depth affine in log2 N: no\n";
    }
  }
  std::string chi_line = "chi:";
  for (const Row& row : rows) chi_line += " " + std::to_string(row.chi);
  res.report += chi_line + "\n";
  res.report += render_depth_table(last);

  std::string csv = "n,chi,registers,prep_depth,per_step_depth,ancillas,padded\n";
  for (const Row& row : rows) {
    csv += std::to_string(row.n) + "," + std::to_string(row.chi) + "," +
           std::to_string(row.regs) + "," + fmt_g(row.prep) + "," +
           std::to_string(row.step) + "," + std::to_string(row.ancillas) +
           "," + std::to_string(row.padded) + "\n";
  }
  res.artifacts.emplace_back("sweep.csv", csv);
  return res;
}

}  // namespace

FermionModel model_from_generator(const std::string& spec) {
  return build_generator_model(parse_gen_spec(spec));
}

FermionModel model_from_generator(const std::string& spec, uint32_t n_override,
                                  uint64_t seed_override) {
  GenSpec g = parse_gen_spec(spec);
  g.keys["N"] = static_cast<double>(n_override);
  g.keys["seed"] = static_cast<double>(seed_override);
  return build_generator_model(std::move(g));
}

RunOutput run_command(const RunConfig& config) {
  switch (config.command) {
    case CliCommand::Encode:
      return run_encode(config);
    case CliCommand::Verify:
      return run_verify(config);
    case CliCommand::Depth:
      return run_depth(config);
    case CliCommand::Simulate:
      return run_simulate(config);
    case CliCommand::Sweep:
      return run_sweep(config);
  }
  throw std::logic_error("unknown command");
}

}  // namespace auxenc
