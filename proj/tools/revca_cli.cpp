// revca: command-line front end.
//
//   revca <subcommand> [--preset NAME] [--config FILE] [--set section.key=value ...] [--out DIR]
//
// Settings are layered preset < config file < environment < --set. Every run
// writes into <out>/<subcommand>-<hash>, where <hash> is the SHA-256 of the
// resolved config, together with a manifest and the resolved config.ini.
//
// Environment: REVCA_OUTPUT_ROOT (default ./revca-out), REVCA_DIM_CAP.

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment_config.hpp"

namespace fs = std::filesystem;
using namespace revca;
using namespace revca::cli;

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Invocation {
  std::string subcommand;
  std::string preset;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_root;
  std::string operator_path;  // classify only
};

// Collects output files and check results for the manifest.
class RunContext {
 public:
  RunContext(std::string subcommand, ExperimentConfig cfg, const std::string& out_root)
      : subcommand_(std::move(subcommand)), cfg_(std::move(cfg)) {
    hash_ = sha256_hex(subcommand_ + "\n" + cfg_.to_ini());
    dir_ = fs::path(out_root) / (subcommand_ + "-" + hash_.substr(0, 16));
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  const ExperimentConfig& config() const { return cfg_; }

  void write(const std::string& name, const std::string& contents) {
    write_file((dir_ / name).string(), contents);
    outputs_[name] = sha256_hex(contents);
  }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  void input(const std::string& path) { inputs_[path] = sha256_hex(read_file(path)); }

  void check(const std::string& name, bool passed, const std::string& detail = {}) {
    checks_[name] = Json{{"passed", passed}, {"detail", detail}};
    if (!passed && first_failure_.empty()) first_failure_ = name + (detail.empty() ? "" : ": " + detail);
  }

  // Writes config.ini and manifest.json, then reports a failed check as an error.
  Json finish() {
    write("config.ini", cfg_.to_ini());
    Json manifest{{"tool", "revca"},
                  {"subcommand", subcommand_},
                  {"config_hash", hash_},
                  {"config", cfg_.to_json()},
                  {"inputs", inputs_},
                  {"checks", checks_},
                  {"outputs", outputs_},
                  {"status", first_failure_.empty() ? "ok" : "failed"}};
    write_file((dir_ / "manifest.json").string(), manifest.dump(2) + "\n");
    if (!first_failure_.empty())
      throw Error(ErrorCode::invariant_failed, "check failed: " + first_failure_ + " (see " + dir_.string() + ")");
    return Json{{"status", "ok"}, {"subcommand", subcommand_}, {"output_dir", dir_.string()}, {"config_hash", hash_}};
  }

 private:
  std::string subcommand_;
  ExperimentConfig cfg_;
  std::string hash_;
  fs::path dir_;
  Json inputs_ = Json::object();
  Json outputs_ = Json::object();
  Json checks_ = Json::object();
  std::string first_failure_;
};

std::string padded(long v) {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << v;
  return os.str();
}

AutomatonState initial_state(const ExperimentConfig& cfg, const LatticeSpec& spec) {
  const std::string kind = cfg.text("run.initial", "random");
  if (kind == "zero") return zero_state(spec);
  if (kind != "random") throw Error(ErrorCode::invalid_config, "run.initial must be random or zero");
  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("run.seed", 1)));
  return random_state(spec, rng);
}

long epochs_of(const ExperimentConfig& cfg) {
  const long epochs = cfg.integer("run.epochs", 10);
  if (epochs < 0) throw Error(ErrorCode::invalid_config, "run.epochs must be non-negative");
  return epochs;
}

std::size_t cap_of(const ExperimentConfig& cfg) {
  const long cap = cfg.integer("lift.cap", static_cast<long>(kDefaultDimensionCap));
  if (cap < 1) throw Error(ErrorCode::invalid_config, "lift.cap must be positive");
  return static_cast<std::size_t>(cap);
}

int order_of(const ExperimentConfig& cfg) {
  const long order = cfg.integer("lift.order", 2);
  check_order(static_cast<int>(order));
  return static_cast<int>(order);
}

void dump_state(RunContext& ctx, const Automaton& ca, const AutomatonState& s, const std::string& stem) {
  ctx.write(stem + ".csv", state_to_csv(ca, s));
  if (s.spec.dims() <= 2) ctx.write(stem + ".pgm", field_to_pgm(s.spec, field_by_site(ca, s)));
}

Json run_simulate(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const LatticeSpec spec = lattice_of(cfg);
  const Automaton ca(spec, rule_of(cfg, spec));
  if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
  const long epochs = epochs_of(cfg);
  const long every = cfg.integer("run.dump_every", 1);
  if (every < 1) throw Error(ErrorCode::invalid_config, "run.dump_every must be >= 1");

  const AutomatonState start = initial_state(cfg, spec);
  AutomatonState s = start;
  dump_state(ctx, ca, s, "state_" + padded(0));
  for (long e = 1; e <= epochs; ++e) {
    s = ca.step_epoch(std::move(s));
    if (e % every == 0 || e == epochs) dump_state(ctx, ca, s, "state_" + padded(e));
  }
  Json report{{"lattice", to_json(spec)}, {"rule", to_json(ca.rule().spec())}, {"epochs", epochs},
              {"single_steps", 2 * epochs}, {"dump_every", every}, {"final_epoch", s.epoch}};
  if (cfg.flag("run.inverse", false)) {
    for (long e = epochs - 1; e >= 0; --e) {
      s = ca.step_epoch_inverse(std::move(s));
      if (e % every == 0) dump_state(ctx, ca, s, "inverse_" + padded(e));
    }
    const bool same = s == start;
    report["round_trip_identical"] = same;
    ctx.check("round_trip", same, same ? "" : "inverse run did not restore the initial state");
  }
  ctx.write_json("simulate.json", report);
  return report;
}

Json run_diff_pattern(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const LatticeSpec spec = lattice_of(cfg);
  const Automaton ca(spec, rule_of(cfg, spec));
  if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
  const long epochs = epochs_of(cfg);
  Coord site;
  if (cfg.has("perturb.site")) {
    const auto sites = parse_sites(cfg, "perturb.site");
    if (sites.size() != 1) throw Error(ErrorCode::invalid_config, "perturb.site needs exactly one coordinate");
    site = sites[0];
  } else {
    for (int e : spec.extents) site.push_back(e / 2);
  }
  const int delta = static_cast<int>(cfg.integer("perturb.delta", 1));

  const AutomatonState seed = initial_state(cfg, spec);
  const DiffPatternReport r = difference_pattern(ca, seed, site, delta, epochs);
  Json report = to_json(r);
  report["lattice"] = to_json(spec);
  report["rule"] = to_json(ca.rule().spec());
  ctx.write_json("diff_pattern.json", report);

  std::ostringstream csv;
  for (std::size_t a = 0; a < spec.dims(); ++a) csv << axis_name(a) << (a + 1 < spec.dims() ? "," : "\n");
  for (const auto& c : r.changed_cells)
    for (std::size_t a = 0; a < c.size(); ++a) csv << c[a] << (a + 1 < c.size() ? "," : "\n");
  ctx.write("changed_cells.csv", csv.str());
  if (spec.dims() <= 2) {
    const Geometry& geo = ca.geometry();
    std::vector<int> mask(geo.cell_count(), 0);
    for (const auto& c : r.changed_cells) mask[geo.index_of(c)] = 1;
    LatticeSpec binary = spec;
    binary.modulus = 2;
    ctx.write("difference.pgm", field_to_pgm(binary, mask));
    dump_state(ctx, ca, ca.run(seed, epochs), "final_state");
  }
  ctx.check("light_cone", r.within_light_cone,
            "support radius " + std::to_string(r.support_radius) + " vs bound " + std::to_string(2 * r.epochs));
  return report;
}

Json run_lift(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const LatticeSpec spec = lattice_of(cfg);
  const Automaton ca(spec, rule_of(cfg, spec));
  if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
  const OntologicalBasis basis(spec, cap_of(cfg));
  const Evolution evo = build_evolution(basis, ca);

  bool consistent = true;
  for (std::size_t i = 0; i < basis.dim() && consistent; ++i)
    consistent = evo.u_image[i] == basis.encode(ca.step_epoch(basis.decode(i)));
  ctx.check("classical_consistency", consistent);

  const auto shift = int_list(cfg, "lift.shift_offsets");
  const Generators gens = build_generators(basis, ca, shift);
  Json generator_classes = Json::array();
  for (const auto& g : gens.local) generator_classes.push_back(std::string(to_string(classify(g))));

  Json report{{"lattice", to_json(spec)},
              {"rule", to_json(ca.rule().spec())},
              {"dim", basis.dim()},
              {"convention", std::string(OntologicalBasis::convention())},
              {"classes", {{"A", std::string(to_string(classify(evo.A)))},
                           {"B", std::string(to_string(classify(evo.B)))},
                           {"U", std::string(to_string(classify(evo.U)))}}},
              {"generator_classes", generator_classes},
              {"cycles", to_json(classical_cycle_decomposition(basis, ca))}};
  ctx.write_json("lift.json", report);
  ctx.write("A.csv", permutation_to_csv(evo.A));
  ctx.write("B.csv", permutation_to_csv(evo.B));
  ctx.write("U.csv", permutation_to_csv(evo.U));
  if (cfg.flag("lift.include_operators", false)) {
    Json ops = Json::array();
    for (const auto& g : gens.local) ops.push_back(operator_to_json(g));
    ctx.write_json("generators.json", ops);
  }
  return report;
}

HamiltonianBundle hamiltonian_of(RunContext& ctx, const OntologicalBasis& basis, const Automaton& ca) {
  const auto& cfg = ctx.config();
  const int order = order_of(cfg);
  const auto branch = int_list(cfg, "lift.branch_offsets");
  const auto shift = int_list(cfg, "lift.shift_offsets");
  HamiltonianBundle bundle = build_hamiltonian(basis, ca, order, branch, shift);

  const Generators gens = build_generators(basis, ca, shift);
  const double assembly = max_abs(DenseOperator(bundle.H_truncated - global_truncated_hamiltonian(gens, order)));
  ctx.check("assembly_identity", assembly <= 1e-12, "max deviation " + sci(assembly));
  const Evolution evo = build_evolution(basis, ca);
  const double rebuild = max_abs(DenseOperator(exp_minus_i(bundle.H_exact, 2.0) - evo.U));
  ctx.check("reconstruction", rebuild <= 1e-10, "max |exp(-2iH) - U| " + sci(rebuild));
  const double conserved = max_abs(commutator(bundle.H_exact, evo.U));
  ctx.check("energy_conservation", conserved <= 1e-10, "max |[H, U]| " + sci(conserved));
  return bundle;
}

Json run_hamiltonian(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const LatticeSpec spec = lattice_of(cfg);
  const Automaton ca(spec, rule_of(cfg, spec));
  if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
  const OntologicalBasis basis(spec, cap_of(cfg));
  const HamiltonianBundle bundle = hamiltonian_of(ctx, basis, ca);
  Json report = to_json(bundle, cfg.flag("lift.include_operators", false));
  ctx.write_json("hamiltonian.json", report);
  report.erase("local_terms");
  return report;
}

std::vector<Coord> cut_of(const ExperimentConfig& cfg, const Geometry& geo) {
  if (cfg.has("spectrum.cut")) return parse_sites(cfg, "spectrum.cut");
  // Default: the half with axis-0 coordinate below L0 / 2.
  std::vector<Coord> cut;
  for (std::size_t s = 0; s < geo.cell_count(); ++s) {
    const Coord c = geo.coord_of(s);
    if (c[0] < geo.spec().extents[0] / 2) cut.push_back(c);
  }
  return cut;
}

Json run_spectrum(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const LatticeSpec spec = lattice_of(cfg);
  const Automaton ca(spec, rule_of(cfg, spec));
  if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
  const OntologicalBasis basis(spec, cap_of(cfg));
  const HamiltonianBundle bundle = hamiltonian_of(ctx, basis, ca);
  const SpectrumReport sr = spectrum(bundle, basis.geometry().cell_count());
  ctx.check("ground_state_bound", sr.bound_holds,
            "sum of site minima " + sci(sr.density_bound) + " vs E0 " + sci(sr.ground_energy_truncated));

  const CycleOracle oracle = classical_cycle_decomposition(basis, ca);
  const auto phases = unitary_eigenphases(build_evolution(basis, ca).U);
  double oracle_dev = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i)
    oracle_dev = std::max(oracle_dev, std::abs(phases[i] - oracle.predicted_phases[i]));
  ctx.check("cycle_oracle", oracle_dev <= 1e-10, "max phase deviation " + sci(oracle_dev));

  const auto cut = cut_of(cfg, basis.geometry());
  Json report{{"lattice", to_json(spec)},
              {"rule", to_json(ca.rule().spec())},
              {"order", bundle.order},
              {"spectrum", to_json(sr)},
              {"cycles", to_json(oracle)},
              {"cut", cut},
              {"entanglement", to_json(vacuum_entanglement(basis, bundle.H_exact, cut))}};
  ctx.write_json("spectrum.json", report);
  ctx.write("exact_eigenvalues.csv", eigenvalues_to_csv(sr.exact_eigenvalues));
  ctx.write("truncated_eigenvalues.csv", eigenvalues_to_csv(sr.truncated_eigenvalues));
  return Json{{"ground_energy_exact", sr.ground_energy_exact},
              {"ground_energy_truncated", sr.ground_energy_truncated},
              {"entropy", report["entanglement"]["entropy"]}};
}

DenseOperator operator_file(RunContext& ctx, const std::string& path) {
  ctx.input(path);
  try {
    return operator_from_json(Json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, "operator file '" + path + "' is not valid JSON: " + e.what());
  }
}

Json run_converge(RunContext& ctx) {
  const auto& cfg = ctx.config();
  DenseOperator p, q;
  Json source;
  if (cfg.has("converge.p") || cfg.has("converge.q")) {
    if (!cfg.has("converge.p") || !cfg.has("converge.q"))
      throw Error(ErrorCode::invalid_config, "converge.p and converge.q must be given together");
    p = operator_file(ctx, cfg.text("converge.p", ""));
    q = operator_file(ctx, cfg.text("converge.q", ""));
    source = "operator files";
  } else {
    const LatticeSpec spec = lattice_of(cfg);
    const Automaton ca(spec, rule_of(cfg, spec));
    if (cfg.has("rule.table")) ctx.input(cfg.text("rule.table", ""));
    const OntologicalBasis basis(spec, cap_of(cfg));
    const Generators gens = build_generators(basis, ca, int_list(cfg, "lift.shift_offsets"));
    p = Complex(0, -1) * gens.a_total;
    q = Complex(0, -1) * gens.b_total;
    source = Json{{"lattice", to_json(spec)}, {"rule", to_json(ca.rule().spec())}};
  }
  const std::vector<double> eps = cfg.has("converge.eps") ? cfg.reals("converge.eps")
                                                          : std::vector<double>{1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> orders = int_list(cfg, "converge.orders");
  if (orders.empty()) orders = {1, 2, 3, 4};
  const ConvergenceReport r = convergence_probe(p, q, eps, orders, cfg.real("converge.max_phase_step", 0.1));

  Json report = to_json(r);
  report["generators"] = source;
  ctx.write_json("converge.json", report);
  std::ostringstream csv;
  csv.precision(17);
  csv << "eps,order,error\n";
  for (const auto& pt : r.points)
    for (std::size_t k = 0; k < orders.size(); ++k) csv << pt.eps << ',' << orders[k] << ',' << pt.truncation_errors[k] << '\n';
  ctx.write("errors.csv", csv.str());
  return Json{{"divergence_onset", report["divergence_onset"]}};
}

Json run_classify(RunContext& ctx, const std::string& path) {
  const DenseOperator op = operator_file(ctx, path);
  const auto tol = ToleranceContext::for_dim(static_cast<std::size_t>(op.rows()));
  const Json report{{"class", std::string(to_string(classify(op, tol)))}, {"dim", op.rows()}, {"tolerance", tol.abs_tol}};
  ctx.write_json("classify.json", report);
  return report;
}

ExperimentConfig resolve(const Invocation& inv) {
  ExperimentConfig cfg;
  if (!inv.preset.empty()) cfg.merge(ExperimentConfig::preset(inv.preset));
  if (!inv.config_path.empty()) cfg.merge(ExperimentConfig::load(inv.config_path));
  if (const char* cap = std::getenv("REVCA_DIM_CAP"); cap && *cap) cfg.set("lift.cap", cap);
  for (const auto& o : inv.overrides) cfg.set(o);
  if (!inv.operator_path.empty()) cfg.set("classify.operator", inv.operator_path);
  cfg.validate_keys();
  return cfg;
}

Json dispatch(const Invocation& inv) {
  std::string root = inv.out_root;
  if (root.empty()) {
    const char* env = std::getenv("REVCA_OUTPUT_ROOT");
    root = env && *env ? env : "revca-out";
  }
  ExperimentConfig cfg = resolve(inv);
  if (inv.subcommand == "classify" && !cfg.has("classify.operator"))
    throw Error(ErrorCode::usage, "classify needs --operator FILE");
  RunContext ctx(inv.subcommand, cfg, root);
  Json summary;
  if (inv.subcommand == "simulate") summary = run_simulate(ctx);
  else if (inv.subcommand == "diff-pattern") summary = run_diff_pattern(ctx);
  else if (inv.subcommand == "lift") summary = run_lift(ctx);
  else if (inv.subcommand == "hamiltonian") summary = run_hamiltonian(ctx);
  else if (inv.subcommand == "spectrum") summary = run_spectrum(ctx);
  else if (inv.subcommand == "converge") summary = run_converge(ctx);
  else if (inv.subcommand == "classify") summary = run_classify(ctx, cfg.text("classify.operator", ""));
  Json out = ctx.finish();
  out["result"] = summary;
  return out;
}

int fail(ErrorCode code, const std::string& message) {
  const Json err{{"error", {{"code", static_cast<int>(code)}, {"name", std::string(to_string(code))}, {"message", message}}}};
  std::cerr << err.dump() << std::endl;
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible second-order cellular automata and their Hamiltonian lift"};
  app.require_subcommand(1);
  Invocation inv;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "run the automaton and dump every state"},
      {"diff-pattern", "propagate a one-cell perturbation and measure its light cone"},
      {"lift", "build the ontological basis and permutation operators"},
      {"hamiltonian", "assemble truncated and exact Hamiltonians"},
      {"spectrum", "spectra, ground-state bound, cycle oracle and vacuum entanglement"},
      {"converge", "BCH truncation errors and divergence flag over an eps grid"},
      {"classify", "classify an operator file as beable, changeable or superimposable"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--preset", inv.preset, "fig2-classical, lift-small or lift-medium");
    sub->add_option("--config", inv.config_path, "INI experiment config")->check(CLI::ExistingFile);
    sub->add_option("--set", inv.overrides, "override a setting: section.key=value");
    sub->add_option("--out", inv.out_root, "output root (default $REVCA_OUTPUT_ROOT or ./revca-out)");
    if (name == "classify") sub->add_option("--operator", inv.operator_path, "operator JSON file");
    sub->callback([&inv, n = name] { inv.subcommand = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(ErrorCode::usage, e.what());
  }

  try {
    std::cout << dispatch(inv).dump(2) << std::endl;
    return 0;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::internal, e.what());
  }
}
