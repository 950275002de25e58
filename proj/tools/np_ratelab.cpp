// np_ratelab: analyze / learn / construct / simulate.
//
// Exit codes: 0 ok, 1 --expect mismatch or unexpected failure, 2 bad flags or
// arguments, 3 unreadable or malformed input, 4 infeasible instance,
// 5 failed verification.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "npr/adversary.hpp"
#include "npr/fixtures.hpp"
#include "npr/io.hpp"
#include "npr/learners.hpp"
#include "npr/ratelab.hpp"
#include "npr/sampling.hpp"
#include "npr/structure.hpp"

using namespace npr;

namespace {

struct Globals {
  bool json_out = false;
  std::optional<std::uint64_t> seed;
};

void emit(const Globals& g, const json& j) {
  if (g.json_out) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) {
    if (k == "format") continue;
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

// Either a compiled-in fixture or a class file.
InstanceFile load_instance(const std::string& fixture, const std::string& path) {
  if (!fixture.empty() && !path.empty()) throw InvalidArgument("give --fixture or --class, not both");
  if (!fixture.empty()) {
    Fixture f = make_fixture(fixture);
    return {f.space, f.H, f.mu0, f.mu1};
  }
  if (path.empty()) throw InvalidArgument("one of --fixture or --class is required");
  return instance_from_json(read_json_file(path));
}

// A bare mass array, {"mass": [...]}, or an instance file's distributions.<key>.
Distribution load_distribution(const std::string& path, const char* key) {
  const json j = read_json_file(path);
  if (j.is_object() && j.contains("distributions")) {
    const auto& d = j.at("distributions");
    if (!d.contains(key)) throw InputError("'" + path + "' has no " + key);
    return distribution_from_json(d.at(key));
  }
  return distribution_from_json(j);
}

Sample load_sample(const std::string& path) {
  const json j = read_json_file(path);
  try {
    const json& arr = j.is_object() ? j.at("draws") : j;
    Sample s;
    s.draws = arr.get<std::vector<std::size_t>>();
    if (s.draws.empty()) throw InputError("'" + path + "' holds an empty sample");
    return s;
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not a sample: " + e.what());
  }
}

json atoms_of(const std::vector<std::size_t>& idx) { return json(idx); }

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string fixture, path;
  std::vector<double> alphas;
};

int cmd_analyze(const Globals& g, const AnalyzeArgs& a) {
  const InstanceFile inst = load_instance(a.fixture, a.path);
  const StructureReport rep = analyze_structure(inst.H);
  json j;
  j["format"] = kFormat;
  const json structure = to_json(rep);
  for (const auto& [k, v] : structure.items()) j[k] = v;
  j["totally_ordered"] = is_totally_ordered(inst.H).totally_ordered;
  const auto top = maximal_element(inst.H);
  j["maximal_element"] = top ? json(*top) : json(nullptr);
  json probes = json::array();
  if (inst.mu0) {
    std::vector<double> alphas = a.alphas;
    if (alphas.empty()) alphas = {0.1, 0.2, 0.3, 0.4};
    for (double alpha : alphas) {
      const auto sub = constrained_subclass(inst.H, *inst.mu0, alpha);
      const auto m = sub.empty() ? std::nullopt : maximal_element(inst.H, sub);
      probes.push_back({{"alpha", alpha},
                        {"subclass_size", sub.size()},
                        {"totally_ordered", sub.empty() || is_totally_ordered(inst.H, sub).totally_ordered},
                        {"maximal_element", m ? json(*m) : json(nullptr)}});
    }
  } else if (!a.alphas.empty()) {
    throw InvalidArgument("--alpha probes need a mu0 in the instance");
  }
  j["totally_ordered_at"] = std::move(probes);
  emit(g, j);
  return 0;
}

// --- learn -----------------------------------------------------------------

struct LearnArgs {
  std::string fixture, path, mu0, mu0_sample, mu1, algorithm = "erm";
  double alpha = 0, epsilon0 = 0, delta0 = 0, delta = 0.05;
  std::size_t n = 0;
};

int cmd_learn(const Globals& g, const LearnArgs& a) {
  const InstanceFile inst = load_instance(a.fixture, a.path);
  LearnerConfig cfg{a.alpha, a.epsilon0, a.delta0, a.delta, a.mu0_sample.empty()};
  cfg.validate();
  const LearnerKind kind = parse_learner_kind(a.algorithm);
  if (kind == LearnerKind::constant) throw InvalidArgument("--algorithm must be erm or maximal-first");

  std::optional<Distribution> mu0 = inst.mu0;
  if (!a.mu0.empty()) mu0 = load_distribution(a.mu0, "mu0");
  std::optional<Distribution> mu1 = inst.mu1;
  if (!a.mu1.empty()) mu1 = load_distribution(a.mu1, "mu1");
  if (!mu1) throw InvalidArgument("a mu1 is required (--mu1 or the instance's distributions)");
  if (mu1->size() != inst.H.atom_count()) throw InputError("mu1 length differs from the atom count");

  Mu0Input input = Distribution::uniform(1);
  if (cfg.mu0_known) {
    if (!mu0) throw InvalidArgument("a mu0 is required (--mu0, --mu0-sample or the instance)");
    if (mu0->size() != inst.H.atom_count()) throw InputError("mu0 length differs from the atom count");
    input = *mu0;
  } else {
    input = load_sample(a.mu0_sample);
  }
  const std::uint64_t seed = g.seed.value_or(0);
  const Sample S1 = draw_sample(*mu1, a.n, seed);
  const LearnerOutput out = kind == LearnerKind::erm ? algorithm1(inst.H, input, S1, cfg)
                                                     : algorithm2(inst.H, input, S1, cfg);
  json j = to_json(out, inst.H);
  j["algorithm"] = to_string(kind);
  j["n"] = a.n;
  j["seed"] = seed;
  if (mu0) {
    j["excess_risk"] = excess_risk(inst.H[out.chosen], inst.H, *mu0, *mu1, cfg.alpha);
    j["feasible"] = risk_mu0(inst.H[out.chosen], *mu0) <= cfg.alpha + cfg.epsilon0;
  }
  emit(g, j);
  return 0;
}

// --- construct -------------------------------------------------------------

struct ConstructArgs {
  std::string kind, fixture, path, probe = "maximal-first";
  std::size_t vc_dimension = 2, n = 100, max_codes = 16;
  double alpha = 0.25, c1 = 0.5, epsilon0 = 0.0, delta0 = 0.01;
};

json variants_json(const std::vector<Distribution>& v) {
  json a = json::array();
  for (const auto& d : v) a.push_back(to_json(d));
  return a;
}

int construct_packing(const Globals& g, const ConstructArgs& a) {
  const std::uint64_t seed = g.seed.value_or(0);
  const PackingFamily f = build_packing_family(a.vc_dimension, a.alpha, a.n, a.c1, seed, a.max_codes);
  json j;
  if (f.d <= 20) {
    j = to_json(InstanceFile{f.space, f.companion(), f.mu0, f.mu1_variants.front()});
  } else {
    j["format"] = kFormat;
    j["atoms"] = f.space.labels();
    j["distributions"] = {{"mu0", to_json(f.mu0)}, {"mu1", to_json(f.mu1_variants.front())}};
  }
  j["variants"] = variants_json(f.mu1_variants);
  j["sigma_codes"] = f.sigma_codes;

  std::size_t min_dist = f.sigma_codes.front().size();
  double min_gap = 1.0;
  for (std::size_t i = 0; i < f.sigma_codes.size(); ++i) {
    for (std::size_t k = 0; k < f.sigma_codes.size(); ++k) {
      if (i == k) continue;
      min_dist = std::min(min_dist, hamming_distance(f.sigma_codes[i], f.sigma_codes[k]));
      const auto& mu1 = f.mu1_variants[i];
      min_gap = std::min(min_gap, risk_mu1(f.optimal_set(f.sigma_codes[k]), mu1) -
                                      risk_mu1(f.optimal_set(f.sigma_codes[i]), mu1));
    }
  }
  const double required_gap = f.three_point ? f.delta_gap : f.delta_gap / 8;
  const bool ok = min_gap >= required_gap * (1 - 1e-12);
  j["provenance"] = {{"kind", "packing"},
                     {"parameters", {{"vc_dimension", a.vc_dimension}, {"alpha", a.alpha}, {"n", a.n},
                                     {"c1", a.c1}, {"max_codes", a.max_codes}}},
                     {"seed", seed},
                     {"delta_gap", f.delta_gap},
                     {"feasible_level", f.alpha},
                     {"three_point", f.three_point},
                     {"verification", {{"min_code_distance", min_dist},
                                       {"min_optimal_risk_gap", min_gap},
                                       {"required_gap", required_gap},
                                       {"passed", ok}}}};
  emit(g, j);
  return ok ? 0 : 5;
}

int construct_nomax(const Globals& g, const ConstructArgs& a) {
  const InstanceFile inst = load_instance(a.fixture, a.path);
  if (!inst.mu0) throw InvalidArgument("the instance needs a mu0");
  Distribution mu0 = *inst.mu0;
  if (a.epsilon0 > 0) mu0 = transport_measure(inst.H, mu0, a.alpha, a.epsilon0).mu0_prime;

  NoMaxFamily f;
  if (a.probe == "fixed") {
    f = build_nomax_family_fixed(inst.H, mu0, a.alpha, a.n);
  } else {
    const LearnerKind kind = parse_learner_kind(a.probe);
    const std::size_t vc = vc_dimension(inst.H);
    const auto feasible = constrained_subclass(inst.H, mu0, a.alpha);
    const Probe probe = [&](const Sample& s) {
      return choose(kind, inst.H, feasible, s.counts(inst.H.atom_count()),
                    epsilon_n(vc, s.draws.size(), 0.05))
          .chosen;
    };
    f = build_nomax_family(inst.H, mu0, a.alpha, a.n, probe);
  }
  const Distribution mu1 = f.variant();
  const double excess = excess_risk(inst.H[f.probe_choice], inst.H, mu0, mu1, a.alpha);
  const bool ok = excess >= 1.0 / static_cast<double>(a.n);

  json j = to_json(InstanceFile{inst.space, inst.H, mu0, mu1});
  j["variants"] = variants_json(f.all_variants());
  j["provenance"] = {{"kind", "nomax"},
                     {"parameters", {{"alpha", a.alpha}, {"n", a.n}, {"probe", a.probe},
                                     {"transport_epsilon0", a.epsilon0}}},
                     {"seed", g.seed.value_or(0)},
                     {"h0", f.h0}, {"x0", f.x0}, {"probe_choice", f.probe_choice},
                     {"h1", f.h1}, {"x1", f.x1}, {"escape_atoms", atoms_of(f.escape_atoms)},
                     {"strict_cover", f.strict_cover},
                     {"verification", {{"no_maximal_element", true},
                                       {"probe_excess", excess},
                                       {"passed", ok}}}};
  emit(g, j);
  return ok ? 0 : 5;
}

int construct_transport(const Globals& g, const ConstructArgs& a) {
  const InstanceFile inst = load_instance(a.fixture, a.path);
  if (!inst.mu0) throw InvalidArgument("the instance needs a mu0");
  const TransportResult t = transport_measure(inst.H, *inst.mu0, a.alpha, a.epsilon0);
  json j = to_json(InstanceFile{inst.space, inst.H, t.mu0_prime, inst.mu1});
  j["provenance"] = {{"kind", "transport"},
                     {"parameters", {{"alpha", a.alpha}, {"epsilon0", a.epsilon0}}},
                     {"seed", g.seed.value_or(0)},
                     {"unchanged", t.unchanged},
                     {"case", t.unchanged ? "none" : (t.case_one ? "I" : "II")},
                     {"target", t.target},
                     {"moved", t.moved},
                     {"feasible_set", t.feasible},
                     {"verification", {{"identities", true}, {"passed", true}}}};
  emit(g, j);
  return 0;
}

int cmd_construct(const Globals& g, const ConstructArgs& a) {
  if (a.kind == "packing") return construct_packing(g, a);
  if (a.kind == "nomax") return construct_nomax(g, a);
  return construct_transport(g, a);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string experiment, out = ".", expect;
  std::optional<std::size_t> threads;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  ExperimentConfig cfg = experiment_from_json(read_json_file(a.experiment));
  if (g.seed) cfg.master_seed = *g.seed;
  if (a.threads) cfg.threads = *a.threads;
  std::optional<Regime> expected;
  if (!a.expect.empty()) expected = parse_regime(a.expect);

  const RateReport r = run_experiment(cfg);
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) throw InputError("cannot create '" + a.out + "': " + ec.message());
  const auto dir = std::filesystem::path(a.out);
  write_text_file((dir / "rate_report.json").string(), to_json(r, cfg).dump(2) + "\n");
  write_text_file((dir / "rate_report.csv").string(), rate_report_csv(r));

  json j;
  j["format"] = kFormat;
  j["regime"] = to_string(r.regime);
  j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  j["slope_ci"] = r.slope_ci ? json::array({r.slope_ci->first, r.slope_ci->second}) : json(nullptr);
  j["report"] = (dir / "rate_report.json").string();
  j["csv"] = (dir / "rate_report.csv").string();
  if (expected) j["expected"] = to_string(*expected);
  emit(g, j);
  return (!expected || *expected == r.regime) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neyman-Pearson rate laboratory over finite hypothesis classes"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_out, "Machine-readable output");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every random choice");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Structural report for a class");
  analyze->fallthrough();
  analyze->add_option("--fixture", aa.fixture, "Compiled-in fixture name");
  analyze->add_option("--class", aa.path, "Instance JSON file");
  analyze->add_option("--alpha", aa.alphas, "Levels at which to probe the constrained subclass");

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Run one learner once");
  learn->fallthrough();
  learn->add_option("--fixture", la.fixture, "Compiled-in fixture name");
  learn->add_option("--class", la.path, "Instance JSON file");
  learn->add_option("--mu0", la.mu0, "mu0 distribution file (mu0 known)");
  learn->add_option("--mu0-sample", la.mu0_sample, "mu0 sample file (mu0 unknown)");
  learn->add_option("--mu1", la.mu1, "mu1 distribution file; S1 is drawn from it");
  learn->add_option("--alpha", la.alpha, "Level alpha")->required();
  learn->add_option("--epsilon0", la.epsilon0, "Slack epsilon0 (mu0 unknown)");
  learn->add_option("--delta0", la.delta0, "Confidence delta0 (mu0 unknown)");
  learn->add_option("--delta", la.delta, "Confidence delta in epsilon_n");
  learn->add_option("--n", la.n, "Size of S1")->required();
  learn->add_option("--algorithm", la.algorithm, "erm or maximal-first")
      ->check(CLI::IsMember({"erm", "maximal-first"}));

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Emit a lower-bound instance");
  construct->fallthrough();
  construct->add_option("--kind", ca.kind, "packing, nomax or transport")
      ->required()
      ->check(CLI::IsMember({"packing", "nomax", "transport"}));
  construct->add_option("--fixture", ca.fixture, "Base fixture (nomax, transport)");
  construct->add_option("--class", ca.path, "Base instance file (nomax, transport)");
  construct->add_option("--vc-dimension", ca.vc_dimension, "d_H (packing)");
  construct->add_option("--alpha", ca.alpha, "Level alpha");
  construct->add_option("--n", ca.n, "Sample size the family is tuned to");
  construct->add_option("--c1", ca.c1, "Gap constant c1 (packing)");
  construct->add_option("--max-codes", ca.max_codes, "Cap on packing codewords");
  construct->add_option("--epsilon0", ca.epsilon0, "Transport slack (transport; nomax when > 0)");
  construct->add_option("--probe", ca.probe, "erm, maximal-first or fixed (nomax)")
      ->check(CLI::IsMember({"erm", "maximal-first", "fixed"}));

  SimulateArgs sa;
  std::size_t threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a rate experiment");
  simulate->fallthrough();
  simulate->add_option("--experiment", sa.experiment, "ExperimentConfig JSON")->required();
  simulate->add_option("--out", sa.out, "Output directory");
  simulate->add_option("--expect", sa.expect, "Exit 0 only if the regime matches")
      ->check(CLI::IsMember({"sqrt", "linear", "trivial", "indeterminate"}));
  auto* threads_opt = simulate->add_option("--threads", threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (threads_opt->count() > 0) sa.threads = threads;

  try {
    if (*analyze) return cmd_analyze(g, aa);
    if (*learn) return cmd_learn(g, la);
    if (*construct) return cmd_construct(g, ca);
    if (*simulate) return cmd_simulate(g, sa);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const ResourceError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
