#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

// Line-oriented scenario configuration: `section.key = value`, `#` comments,
// no nesting beyond dotted keys. Unknown keys are errors; every omitted key
// is defaulted and echoed once to the provenance log. The shipped defaults
// form a mid-IR quantum-well-like scenario assembled from typical published
// magnitudes; they are representative inputs, not measured device truth.

namespace triwave {

enum class KeyType { real, integer, text };

struct KeySpec {
  const char* key;
  KeyType type;
  const char* default_text;
  double min;  // for real/integer keys
  double max;
  const char* doc;
};

// The full key schema, in emission/documentation order.
const std::vector<KeySpec>& config_schema();

class ScenarioConfig {
 public:
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  void set_real(const std::string& key, double value);

  // "default: <key> = <value>" lines, one per defaulted key.
  const std::vector<std::string>& provenance() const { return provenance_; }

 private:
  friend ScenarioConfig parse_config(std::string_view);
  std::map<std::string, double> reals_;
  std::map<std::string, long> ints_;
  std::map<std::string, std::string> texts_;
  std::vector<std::string> provenance_;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig parse_config_file(const std::string& path);

struct SweepSpec {
  std::string param;  // dotted real-valued key
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  bool log_scale = false;
};

// The swept values, validated against the schema (steps >= 2; log scale
// needs positive endpoints; the key must exist and be real-valued).
std::vector<double> sweep_values(const ScenarioConfig& cfg, const SweepSpec& sweep);

}  // namespace triwave
