#include "qcompat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcompat/io.hpp"

namespace qcompat::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string state;
  std::string cert_dir;
  std::string format = "json";
  std::string kind = "random";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<int> g;
  std::optional<int> d;
  int k = 2;
  int g_max = 8;
  std::vector<double> direction;
  bool no_timestamp = false;
};

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

class Command {
public:
  Command(std::string name, const Options& opt, std::ostream& out)
      : name_(std::move(name)), opt_(opt), out_(out), start_(std::chrono::steady_clock::now()) {
    report_["command"] = name_;
    if (!opt_.input.empty())
      report_["inputs"] = {{"path", opt_.input}, {"fnv1a64", io::fnv1a64_file(opt_.input)}};
    if (opt_.seed) report_["seed"] = *opt_.seed;
    report_["certificates"] = json::object();
  }

  const Options& opt() const { return opt_; }

  json read_input() const {
    if (opt_.input.empty()) throw InvalidInput("--input is required for " + name_);
    return io::read_file(opt_.input);
  }

  std::uint64_t seed() const {
    if (!opt_.seed) throw InvalidInput("--seed is required for " + name_);
    return *opt_.seed;
  }

  int need(const std::optional<int>& v, const char* flag) const {
    if (!v) throw InvalidInput(std::string(flag) + " is required for " + name_);
    return *v;
  }

  double tol(double fallback) const {
    const double t = opt_.tol.value_or(fallback);
    if (!(t > 0.0)) throw InvalidInput("--tol must be positive");
    return t;
  }

  NormOptions norm_options() const {
    NormOptions o;
    o.g_max = opt_.g_max;
    return o;
  }

  template <std::floating_point T>
  void set(const std::string& key, T v) { report_[key] = round12(v); }
  void set(const std::string& key, json v) { report_[key] = std::move(v); }

  void solver(const SolverStats& s) {
    report_["solver"] = {{"status", sdp::to_string(s.status)}, {"iterations", s.iterations}, {"gap", round12(s.gap)}};
  }

  void certificate(const std::string& kind, const json& artifact) {
    const fs::path dir = !opt_.cert_dir.empty() ? fs::path(opt_.cert_dir)
                         : !opt_.out.empty()     ? fs::path(opt_.out).parent_path()
                                                 : fs::path(".");
    const std::string stem = opt_.input.empty() ? "qcompat" : fs::path(opt_.input).stem().string();
    const fs::path path = (dir.empty() ? fs::path(".") : dir) / (stem + "." + kind + ".json");
    io::write_file(path, artifact);
    report_["certificates"][kind] = path.string();
  }

  void emit() {
    if (!opt_.no_timestamp)
      report_["wall_time_s"] =
          round12(std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
    write_text(report_.dump(2) + "\n");
  }

  void write_text(const std::string& text) const {
    if (opt_.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(opt_.out);
    if (!f) throw InvalidInput(opt_.out + ": cannot write file");
    f << text;
  }

private:
  std::string name_;
  const Options& opt_;
  std::ostream& out_;
  json report_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// norm

void norm_c(Command& c) {
  const ObservableTuple a = io::tuple_from_json(c.read_input());
  const CompatNormResult r = compat_norm(a, c.norm_options());
  c.set("value", r.value);
  c.set("dual_value", r.dual.value);
  c.solver(r.stats);
  c.certificate("decomposition", io::to_json(r.primal));
  c.certificate("witness", io::to_json(r.dual));
}

void norm_cstar(Command& c) {
  const ObservableTuple phi = io::tuple_from_json(c.read_input());
  const CompatDualNormResult r = compat_dual_norm(phi, c.norm_options());
  c.set("value", r.value);
  c.solver(r.stats);
  c.certificate("state", io::to_json(r.state.matrix()));
}

void norm_wit(Command& c) {
  const ObservableTuple x = io::tuple_from_json(c.read_input());
  const WitNormResult r = wit_norm(x, c.norm_options());
  c.set("value", r.value);
  if (c.opt().samples) c.set("sample_lower_bound", wit_norm_sample_lb(x, *c.opt().samples, c.seed()));
  c.solver(r.stats);
  c.certificate("l1decomposition", io::to_json(r.decomposition));
}

void norm_simple(Command& c, double (*f)(const ObservableTuple&)) {
  c.set("value", f(io::tuple_from_json(c.read_input())));
}

// ---------------------------------------------------------------------------
// compat

void compat_check(Command& c, bool spread) {
  const EffectTuple e = io::effects_from_json(c.read_input());
  const CompatibilityResult r = is_compatible(e, c.tol(1e-7), c.norm_options());
  c.set("compatible", r.compatible);
  c.set("value", r.value);
  c.set("margin", r.margin);
  c.solver(r.stats);
  if (r.joint) {
    const JointPovm joint = spread ? spread_slack(*r.joint) : *r.joint;
    const auto post = PostProcessing::canonical(joint, std::vector<int>(static_cast<std::size_t>(e.g()), 2));
    c.set("marginal_error", marginal_error(joint, post, GeneralPovmFamily::from_effects(e)));
    c.set("sum_error", joint.sum_error());
    c.certificate("joint", io::to_json(joint));
  }
  if (r.witness) {
    c.set("witness_value", r.witness->value);
    c.certificate("witness", io::to_json(*r.witness));
  }
}

std::vector<double> direction_or_ones(const Command& c, int g) {
  if (c.opt().direction.empty()) return std::vector<double>(static_cast<std::size_t>(g), 1.0);
  return c.opt().direction;
}

void compat_robustness(Command& c) {
  const EffectTuple e = io::effects_from_json(c.read_input());
  const std::vector<double> dir = direction_or_ones(c, e.g());
  const double tol = c.tol(1e-5);
  c.set("direction", json(dir));
  c.set("tol", tol);
  c.set("threshold", robustness(e, dir, tol, c.norm_options()));
}

void compat_marginal(Command& c) {
  const GeneralPovmFamily f = io::povm_family_from_json(c.read_input());
  const MarginalFormResult r = is_compatible_marginal_form(f, c.tol(1e-7), c.norm_options());
  c.set("compatible", r.compatible);
  c.set("shift", r.shift);
  c.solver(r.stats);
  if (r.joint) {
    const auto post = PostProcessing::canonical(*r.joint, f.outcome_counts());
    c.set("marginal_error", marginal_error(*r.joint, post, f));
    c.set("sum_error", r.joint->sum_error());
    c.certificate("joint", io::to_json(*r.joint));
  }
}

// ---------------------------------------------------------------------------
// witness

void witness_classify(Command& c) {
  const ObservableTuple phi = io::tuple_from_json(c.read_input());
  const WitnessClass w = classify(phi, c.tol(1e-7), c.norm_options());
  c.set("class", to_string(w.kind));
  c.set("proj_l1", w.proj_l1);
  c.set("c_star", w.c_star);
  c.set("borderline_effect", w.borderline_effect);
  c.set("borderline_incompatibility", w.borderline_incompatibility);
  if (!phi.is_zero()) c.solver(w.stats);
}

void witness_make(Command& c) {
  const ObservableTuple x = io::tuple_from_json(c.read_input());
  const DensityMatrix rho = c.opt().state.empty() ? DensityMatrix::maximally_mixed(x.d())
                                                  : io::state_from_json(io::read_file(c.opt().state));
  const ObservableTuple phi = witness_from_pair(x, rho, c.tol(1e-9));
  c.set("inj_l1", inj_norm_l1(x));
  const WitnessClass w = classify(phi, 1e-7, c.norm_options());
  c.set("class", to_string(w.kind));
  c.set("proj_l1", w.proj_l1);
  c.set("c_star", w.c_star);
  c.certificate("phi", io::to_json(phi));
}

void witness_violate(Command& c) {
  const ObservableTuple phi = io::tuple_from_json(c.read_input());
  const Violation v = max_violation(phi);
  c.set("value", v.value);
  c.certificate("maximizer", io::to_json(v.maximizer));
}

// ---------------------------------------------------------------------------
// region

void region_qc(Command& c) {
  const auto& s = c.opt().direction;
  if (s.empty()) throw InvalidInput("--direction is required for region qc");
  c.set("s", json(s));
  c.set("qc_contains", qc_contains(s));
  c.set("simplex_contains", simplex_contains(s));
  if (c.opt().d) {
    const auto known = known_gamma(static_cast<int>(s.size()), *c.opt().d);
    c.set("known_region", known ? json(to_string(*known)) : json(nullptr));
  }
}

void region_tau(Command& c) {
  const TauStar t = tau_star(c.need(c.opt().d, "--d"));
  c.set("d", json(t.d));
  c.set("tau_star", t.value);
  c.set("exact", json(t.fraction()));
  c.set("asymptotic", t.asymptotic);
}

void region_diagram(Command& c) {
  const auto cells = phase_diagram(c.need(c.opt().g, "--g"), c.need(c.opt().d, "--d"));
  if (c.opt().format == "csv") {
    std::ostringstream os;
    write_phase_csv(cells, os);
    c.write_text(os.str());
    return;
  }
  json arr = json::array();
  for (const auto& cell : cells) {
    json j = io::to_json(cell);
    j["tau_star"] = round12(cell.tau_star);
    j["g_tau_sq"] = round12(cell.g_tau_sq);
    arr.push_back(std::move(j));
  }
  c.set("cells", std::move(arr));
  c.emit();
}

void region_probe(Command& c) {
  const int g = c.need(c.opt().g, "--g");
  const int d = c.need(c.opt().d, "--d");
  const auto& s = c.opt().direction;
  if (s.empty()) throw InvalidInput("--direction is required for region probe");
  const int n = c.opt().samples.value_or(100);
  const ProbeResult r = gamma_probe(g, d, s, n, c.seed(), 0, c.norm_options());
  c.set("s", json(s));
  c.set("verdict", r.counterexample_found ? "CounterexampleFound" : "NoCounterexampleFound");
  c.set("membership_proved", false);
  c.set("samples_tested", json(r.samples));
  c.set("max_norm", r.norm);
  if (r.counterexample) {
    c.set("sample_index", json(r.sample_index));
    c.certificate("counterexample", io::to_json(*r.counterexample));
  }
}

// ---------------------------------------------------------------------------
// gen

void gen_effect(Command& c) {
  const int g = c.need(c.opt().g, "--g");
  const int d = c.need(c.opt().d, "--d");
  EffectTuple e;
  if (c.opt().kind == "pauli") {
    e = from_tensor(anticommuting_tuple(g, d));
  } else if (c.opt().kind == "random" || c.opt().kind == "projective") {
    std::mt19937_64 rng(c.seed());
    e = c.opt().kind == "random" ? random_effect_tuple(g, d, rng) : random_projective_tuple(g, d, rng);
  } else {
    throw InvalidInput("--kind must be random, projective or pauli");
  }
  if (!c.opt().direction.empty()) e = add_white_noise(e, c.opt().direction);
  c.write_text(io::to_json(e).dump(2) + "\n");
}

void gen_povm(Command& c) {
  const int g = c.need(c.opt().g, "--g");
  const int d = c.need(c.opt().d, "--d");
  if (c.opt().k < 1) throw InvalidInput("--k must be at least 1");
  const std::vector<int> counts(static_cast<std::size_t>(g), c.opt().k);
  c.write_text(io::to_json(random_povm_family(counts, d, c.seed())).dump(2) + "\n");
}

void gen_tuple(Command& c) {
  const int g = c.need(c.opt().g, "--g");
  const int d = c.need(c.opt().d, "--d");
  ObservableTuple t;
  if (c.opt().kind == "pauli") {
    t = anticommuting_tuple(g, d);
  } else if (c.opt().kind == "random") {
    std::mt19937_64 rng(c.seed());
    std::vector<HermitianMatrix> comps;
    for (int i = 0; i < g; ++i) comps.push_back(random_instance(RandomKind::HermitianGaussian, d, rng));
    t = ObservableTuple(std::move(comps));
  } else {
    throw InvalidInput("--kind must be random or pauli");
  }
  if (!c.opt().direction.empty()) t = t.scaled(c.opt().direction);
  c.write_text(io::to_json(t).dump(2) + "\n");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
  case ErrorCode::NumericalLimit: return kNumericalLimit;
  case ErrorCode::InvalidInput:
  case ErrorCode::NotPsd:
  case ErrorCode::TooManyMeasurements:
  case ErrorCode::NotAnEffectTuple:
  case ErrorCode::TooLarge: return kInvalidInput;
  }
  return kOtherError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint measurability of dichotomic quantum measurements", "qcompat"};
  app.fallthrough();
  app.require_subcommand(1);

  Options opt;
  app.add_option("--input", opt.input, "Input JSON file");
  app.add_option("--out", opt.out, "Write the report or artifact here instead of stdout");
  app.add_option("--seed", opt.seed, "Master seed (required by randomized commands)");
  app.add_option("--tol", opt.tol, "Decision or bisection tolerance");
  app.add_option("--samples", opt.samples, "Number of random samples");
  app.add_option("--g", opt.g, "Number of measurements (maximum for diagram)");
  app.add_option("--d", opt.d, "Hilbert space dimension (maximum for diagram)");
  app.add_option("--k", opt.k, "Outcomes per POVM for gen povm");
  app.add_option("--direction", opt.direction, "Comma-separated vector in [0,1]^g")->delimiter(',');
  app.add_option("--state", opt.state, "Density matrix JSON for witness make");
  app.add_option("--cert-dir", opt.cert_dir, "Directory for certificate files");
  app.add_option("--format", opt.format, "Output format for region diagram")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--kind", opt.kind, "Generator kind for gen effect/tuple");
  app.add_option("--g-max", opt.g_max, "Largest g accepted by the SDP norms");
  app.add_flag("--no-timestamp", opt.no_timestamp, "Omit wall_time_s from the report");

  std::string chosen;
  std::function<void(Command&)> action;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help,
                  std::function<void(Command&)> fn) {
    group->add_subcommand(name, help)->callback([&chosen, &action, group, name, fn] {
      chosen = group->get_name() + " " + name;
      action = fn;
    });
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  CLI::App* norm = group("norm", "Tensor norms of an observable tuple");
  leaf(norm, "c", "Compatibility norm with primal and dual certificates", norm_c);
  leaf(norm, "cstar", "Dual compatibility norm", norm_cstar);
  leaf(norm, "wit", "Witness norm", norm_wit);
  leaf(norm, "injl1", "max over signs of the operator norm of the signed sum", [](Command& c) { norm_simple(c, inj_norm_l1); });
  leaf(norm, "projl1", "Sum of trace norms", [](Command& c) { norm_simple(c, proj_norm_l1); });
  leaf(norm, "injlinf", "Largest operator norm", [](Command& c) { norm_simple(c, inj_norm_linf); });

  CLI::App* compat = group("compat", "Compatibility of effect tuples");
  leaf(compat, "check", "Decide compatibility; emit a joint POVM or a witness", [](Command& c) { compat_check(c, false); });
  leaf(compat, "joint", "As check, with the slack spread over all sign outcomes", [](Command& c) { compat_check(c, true); });
  leaf(compat, "robustness", "Largest noise parameter along a direction", compat_robustness);
  leaf(compat, "marginal", "Marginal-form feasibility for general POVMs", compat_marginal);

  CLI::App* witness = group("witness", "Incompatibility witnesses");
  leaf(witness, "classify", "Classify a witness tuple", witness_classify);
  leaf(witness, "make", "Build a witness from a tuple and a state", witness_make);
  leaf(witness, "violate", "Maximal violation over effect tuples", witness_violate);

  CLI::App* region = group("region", "Compatibility-region bounds");
  leaf(region, "qc", "Quarter-ball and simplex membership", region_qc);
  leaf(region, "tau", "Exact inclusion constant for dimension d", region_tau);
  leaf(region, "diagram", "Phase-diagram grid", region_diagram);
  leaf(region, "probe", "Search for tuples whose noisy version is incompatible", region_probe);

  CLI::App* gen = group("gen", "Generate input files");
  leaf(gen, "effect", "Effect tuple", gen_effect);
  leaf(gen, "povm", "General POVM family", gen_povm);
  leaf(gen, "tuple", "Observable tuple", gen_tuple);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    Command cmd(chosen, opt, out);
    const bool writes_own_output = chosen.rfind("gen ", 0) == 0 || chosen == "region diagram";
    action(cmd);
    if (!writes_own_output) cmd.emit();
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOtherError;
  }
}

} // namespace qcompat::cli
