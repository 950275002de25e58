#pragma once

// Versioned JSON and CSV serialization for instances, reports and experiment
// configurations.

#include <optional>
#include <string>

#include <json.hpp>

#include "npr/learners.hpp"
#include "npr/ratelab.hpp"
#include "npr/space.hpp"
#include "npr/structure.hpp"

namespace npr {

inline constexpr const char* kFormat = "np-ratelab/v1";

using json = nlohmann::ordered_json;

struct InstanceFile {
  FiniteSpace space;
  HypothesisClass H;
  std::optional<Distribution> mu0;
  std::optional<Distribution> mu1;
  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);
/// Decimal string or JSON number. Throws InputError otherwise.
double parse_double(const json& j);
/// "1/n" or a number.
RateParam parse_rate(const json& j);
json rate_to_json(const RateParam& r);

json to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

json to_json(const InstanceFile& inst);
/// Hypotheses are deduplicated on the way in. Throws InputError on malformed input.
InstanceFile instance_from_json(const json& j);

json to_json(const StructureReport& r);
json to_json(const LearnerOutput& out, const HypothesisClass& H);

json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const json& j);

/// With metadata, the report carries generator name and a creation timestamp.
json to_json(const RateReport& r, const ExperimentConfig& cfg, bool with_metadata = true);
RateReport rate_report_from_json(const json& j);
/// Header n,mean_score,stderr,feasibility_freq; numbers at 17 significant digits.
std::string rate_report_csv(const RateReport& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace npr
