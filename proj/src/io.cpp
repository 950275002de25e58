#include "npr/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace npr {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw InputError("expected a number or a decimal string");
  const auto s = j.get<std::string>();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError("not a decimal number: '" + s + "'");
  }
  return v;
}

RateParam parse_rate(const json& j) {
  if (j.is_string() && j.get<std::string>() == "1/n") return {true, 0.0};
  return {false, parse_double(j)};
}

json rate_to_json(const RateParam& r) {
  if (r.per_n) return "1/n";
  return r.value;
}

namespace {

void check_format(const json& j) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  if (j.contains("format") && j.at("format") != kFormat) {
    throw InputError("unsupported format '" + j.at("format").dump() + "'");
  }
}

template <class Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string kind_name(InstanceSpec::Kind k) {
  switch (k) {
    case InstanceSpec::Kind::fixture: return "fixture";
    case InstanceSpec::Kind::packing: return "packing";
    case InstanceSpec::Kind::nomax: return "nomax";
  }
  return "?";
}

std::uint64_t parse_seed(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
  }
  throw InputError("seed must be a nonnegative integer");
}

std::pair<double, double> parse_window(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("a window is a [lo, hi] pair");
  return {parse_double(j[0]), parse_double(j[1])};
}

}  // namespace

json to_json(const Distribution& d) {
  json a = json::array();
  for (double p : d.mass()) a.push_back(format_double(p));
  return a;
}

Distribution distribution_from_json(const json& j) {
  return guarded([&] {
    const json& arr = j.is_object() ? j.at("mass") : j;
    if (!arr.is_array()) throw InputError("a distribution is an array of masses");
    std::vector<double> m;
    for (const auto& x : arr) m.push_back(parse_double(x));
    return Distribution(std::move(m));
  });
}

json to_json(const InstanceFile& inst) {
  json j;
  j["format"] = kFormat;
  j["atoms"] = inst.space.labels();
  json hs = json::array();
  for (std::size_t i = 0; i < inst.H.size(); ++i) hs.push_back(inst.H.hypothesis(i).to_bits());
  j["hypotheses"] = std::move(hs);
  if (inst.mu0 || inst.mu1) {
    json d = json::object();
    if (inst.mu0) d["mu0"] = to_json(*inst.mu0);
    if (inst.mu1) d["mu1"] = to_json(*inst.mu1);
    j["distributions"] = std::move(d);
  }
  return j;
}

InstanceFile instance_from_json(const json& j) {
  return guarded([&] {
    check_format(j);
    std::vector<std::string> labels;
    for (const auto& a : j.at("atoms")) labels.push_back(a.is_string() ? a.get<std::string>() : a.dump());
    FiniteSpace space(labels);
    std::vector<AtomSet> sets;
    for (const auto& h : j.at("hypotheses")) {
      const auto bits = h.get<std::vector<int>>();
      if (bits.size() != space.size()) throw InputError("hypothesis length differs from the atom count");
      sets.push_back(Hypothesis::from_bits(bits).positive());
    }
    if (sets.empty()) throw InputError("a class needs at least one hypothesis");
    InstanceFile inst{space, HypothesisClass::deduplicated(space.size(), sets), std::nullopt, std::nullopt};
    if (j.contains("distributions")) {
      const auto& d = j.at("distributions");
      for (const char* key : {"mu0", "mu1"}) {
        if (!d.contains(key)) continue;
        Distribution dist = distribution_from_json(d.at(key));
        if (dist.size() != space.size()) throw InputError(std::string(key) + " length differs from the atom count");
        (std::string(key) == "mu0" ? inst.mu0 : inst.mu1) = std::move(dist);
      }
    }
    return inst;
  });
}

json to_json(const StructureReport& r) {
  json j;
  j["vc_dimension"] = r.vc_dimension;
  j["separates_three_points"] = r.separates_three_points;
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"h1", w.h1}, {"h2", w.h2}, {"x0", w.x0}, {"x1", w.x1}, {"x2", w.x2}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const LearnerOutput& out, const HypothesisClass& H) {
  json j;
  j["format"] = kFormat;
  j["chosen"] = out.chosen;
  j["chosen_bits"] = H.hypothesis(out.chosen).to_bits();
  j["constraint_set_size"] = out.constraint_set_size;
  j["constraint_set"] = out.constraint_set;
  j["used_maximal_element"] = out.used_maximal_element;
  j["epsilon_n"] = out.epsilon_n;
  return j;
}

json to_json(const ExperimentConfig& cfg) {
  json inst;
  inst["kind"] = kind_name(cfg.instance.kind);
  switch (cfg.instance.kind) {
    case InstanceSpec::Kind::packing:
      inst["vc_dimension"] = cfg.instance.vc_dimension;
      inst["c1"] = cfg.instance.c1;
      inst["max_codes"] = cfg.instance.max_codes;
      break;
    case InstanceSpec::Kind::nomax:
      inst["fixture"] = cfg.instance.fixture;
      inst["fixed_escape"] = cfg.instance.fixed_escape;
      inst["transport_epsilon0"] = cfg.instance.transport_epsilon0;
      break;
    case InstanceSpec::Kind::fixture:
      inst["fixture"] = cfg.instance.fixture;
      break;
  }
  json j;
  j["format"] = kFormat;
  j["instance"] = std::move(inst);
  j["learner"] = to_string(cfg.learner);
  j["constant_index"] = cfg.constant_index;
  j["alpha"] = cfg.alpha;
  j["epsilon0"] = cfg.epsilon0;
  j["delta0"] = rate_to_json(cfg.delta0);
  j["delta"] = rate_to_json(cfg.delta);
  j["mu0_known"] = cfg.mu0_known;
  j["n_grid"] = cfg.n_grid;
  j["trials_per_n"] = cfg.trials_per_n;
  j["master_seed"] = cfg.master_seed;
  j["adversarial"] = cfg.adversarial;
  j["bootstrap_resamples"] = cfg.bootstrap_resamples;
  j["sqrt_window"] = {cfg.sqrt_window.first, cfg.sqrt_window.second};
  j["linear_window"] = {cfg.linear_window.first, cfg.linear_window.second};
  j["threads"] = cfg.threads;
  return j;
}

ExperimentConfig experiment_from_json(const json& j) {
  return guarded([&] {
    check_format(j);
    ExperimentConfig cfg;
    const auto& inst = j.at("instance");
    const auto kind = inst.at("kind").get<std::string>();
    if (kind == "packing") {
      cfg.instance.kind = InstanceSpec::Kind::packing;
      cfg.instance.vc_dimension = inst.value("vc_dimension", std::size_t{2});
      if (inst.contains("c1")) cfg.instance.c1 = parse_double(inst.at("c1"));
      cfg.instance.max_codes = inst.value("max_codes", std::size_t{16});
    } else if (kind == "nomax" || kind == "fixture") {
      cfg.instance.kind = kind == "nomax" ? InstanceSpec::Kind::nomax : InstanceSpec::Kind::fixture;
      cfg.instance.fixture = inst.at("fixture").get<std::string>();
      cfg.instance.fixed_escape = inst.value("fixed_escape", false);
      if (inst.contains("transport_epsilon0")) {
        cfg.instance.transport_epsilon0 = parse_double(inst.at("transport_epsilon0"));
      }
    } else {
      throw InputError("unknown instance kind '" + kind + "'");
    }
    cfg.learner = parse_learner_kind(j.value("learner", std::string("erm")));
    cfg.constant_index = j.value("constant_index", std::size_t{0});
    cfg.alpha = parse_double(j.at("alpha"));
    if (j.contains("epsilon0")) cfg.epsilon0 = parse_double(j.at("epsilon0"));
    if (j.contains("delta0")) cfg.delta0 = parse_rate(j.at("delta0"));
    if (j.contains("delta")) cfg.delta = parse_rate(j.at("delta"));
    cfg.mu0_known = j.value("mu0_known", true);
    cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    cfg.trials_per_n = j.value("trials_per_n", std::size_t{2000});
    if (j.contains("master_seed")) cfg.master_seed = parse_seed(j.at("master_seed"));
    cfg.adversarial = j.value("adversarial", true);
    cfg.bootstrap_resamples = j.value("bootstrap_resamples", std::size_t{1000});
    if (j.contains("sqrt_window")) cfg.sqrt_window = parse_window(j.at("sqrt_window"));
    if (j.contains("linear_window")) cfg.linear_window = parse_window(j.at("linear_window"));
    cfg.threads = j.value("threads", std::size_t{0});
    cfg.validate();
    return cfg;
  });
}

json to_json(const RateReport& r, const ExperimentConfig& cfg, bool with_metadata) {
  json j;
  j["format"] = kFormat;
  if (with_metadata) j["metadata"] = {{"generator", kGeneratorName}, {"created", timestamp()}};
  json c = to_json(cfg);
  c.erase("threads");  // never affects results
  c.erase("format");
  j["config"] = std::move(c);
  json rows = json::array();
  for (const auto& p : r.per_n) {
    rows.push_back({{"n", p.n},
                    {"mean_score", p.mean_score},
                    {"stderr", p.stderr_score},
                    {"feasibility_freq", p.feasibility_freq},
                    {"worst_variant", p.worst_variant},
                    {"variant_means", p.variant_means},
                    {"n0", p.n0},
                    {"epsilon_n", p.epsilon_n}});
  }
  j["per_n"] = std::move(rows);
  j["slope"] = r.slope ? json(*r.slope) : json(nullptr);
  j["slope_ci"] = r.slope_ci ? json::array({r.slope_ci->first, r.slope_ci->second}) : json(nullptr);
  j["regime"] = to_string(r.regime);
  j["fitted_points"] = r.fitted_points;
  return j;
}

RateReport rate_report_from_json(const json& j) {
  return guarded([&] {
    check_format(j);
    RateReport r;
    for (const auto& p : j.at("per_n")) {
      PerN row;
      row.n = p.at("n").get<std::size_t>();
      row.mean_score = p.at("mean_score").get<double>();
      row.stderr_score = p.at("stderr").get<double>();
      row.feasibility_freq = p.at("feasibility_freq").get<double>();
      row.worst_variant = p.at("worst_variant").get<std::size_t>();
      row.variant_means = p.at("variant_means").get<std::vector<double>>();
      row.n0 = p.at("n0").get<std::size_t>();
      row.epsilon_n = p.at("epsilon_n").get<double>();
      r.per_n.push_back(std::move(row));
    }
    if (!j.at("slope").is_null()) r.slope = j.at("slope").get<double>();
    if (!j.at("slope_ci").is_null()) {
      r.slope_ci = std::pair{j.at("slope_ci")[0].get<double>(), j.at("slope_ci")[1].get<double>()};
    }
    r.regime = parse_regime(j.at("regime").get<std::string>());
    r.fitted_points = j.at("fitted_points").get<std::size_t>();
    return r;
  });
}

std::string rate_report_csv(const RateReport& r) {
  std::ostringstream out;
  out << "n,mean_score,stderr,feasibility_freq\n";
  char buf[128];
  for (const auto& p : r.per_n) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", p.n, p.mean_score, p.stderr_score,
                  p.feasibility_freq);
    out << buf;
  }
  return out.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace npr
