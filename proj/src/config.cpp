#include "triwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "triwave/ensemble.hpp"
#include "triwave/errors.hpp"

namespace triwave {

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = {
      {"levels.e1_mev", KeyType::real, "0", -1e6, 1e6, "level 1 energy (meV)"},
      {"levels.e2_mev", KeyType::real, "1302", -1e6, 1e6, "level 2 energy (meV)"},
      {"levels.e3_mev", KeyType::real, "1400", -1e6, 1e6, "level 3 energy (meV)"},
      {"dipoles.d21_enm", KeyType::real, "0.5", 1e-6, 100.0, "2<->1 dipole (e*nm)"},
      {"dipoles.d31_enm", KeyType::real, "0.5", 1e-6, 100.0, "3<->1 dipole (e*nm)"},
      {"dipoles.d32_enm", KeyType::real, "2", 1e-6, 100.0, "3<->2 dipole (e*nm)"},
      {"relax.gamma21_mev", KeyType::real, "7", 1e-9, 1e3, "2<->1 dephasing (meV)"},
      {"relax.gamma31_mev", KeyType::real, "7", 1e-9, 1e3, "3<->1 dephasing (meV)"},
      {"relax.gamma32_mev", KeyType::real, "7", 1e-9, 1e3, "3<->2 dephasing (meV)"},
      {"relax.r32_mev", KeyType::real, "1.5", 0.0, 1e3, "3->2 relaxation (meV)"},
      {"relax.r31_mev", KeyType::real, "0.5", 0.0, 1e3, "3->1 relaxation (meV)"},
      {"relax.r21_mev", KeyType::real, "1.2", 0.0, 1e3, "2->1 relaxation (meV)"},
      {"relax.pump_mev", KeyType::real, "6", 0.0, 1e3, "1->3 injection rate (meV)"},
      {"broadening.kind", KeyType::text, "homogeneous", 0, 0,
       "homogeneous | gaussian | lorentzian"},
      {"broadening.u21_mev", KeyType::real, "0", 0.0, 1e4, "2<->1 width (meV)"},
      {"broadening.u31_mev", KeyType::real, "0", 0.0, 1e4, "3<->1 width (meV)"},
      {"broadening.u32_mev", KeyType::real, "0", 0.0, 1e4, "3<->2 width (meV)"},
      {"broadening.nodes", KeyType::integer, "129", 17, 1e7, "quadrature nodes"},
      {"broadening.cutoff", KeyType::real, "5", 5.0, 100.0, "grid cutoff (units of u)"},
      {"medium.density_cm3", KeyType::real, "1e18", 1.0, 1e24,
       "electron state density (cm^-3)"},
      {"drives.e1_mev", KeyType::real, "3", 0.0, 1e3, "drive 1 Rabi amplitude (meV)"},
      {"drives.e1_phase_rad", KeyType::real, "0", -1e3, 1e3, "drive 1 phase"},
      {"drives.e2_mev", KeyType::real, "3", 0.0, 1e3, "drive 2 Rabi amplitude (meV)"},
      {"drives.e2_phase_rad", KeyType::real, "0", -1e3, 1e3, "drive 2 phase"},
      {"drives.delta1_mev", KeyType::real, "0", -1e3, 1e3,
       "drive 1 detuning from line center (meV)"},
      {"drives.delta2_mev", KeyType::real, "0", -1e3, 1e3,
       "drive 2 detuning from line center (meV)"},
      {"mode_ir.loss_cm", KeyType::real, "150", 1e-6, 1e6,
       "IR intensity loss 2*kappa (cm^-1)"},
      {"mode_ir.mu", KeyType::real, "3.3", 0.1, 20.0, "IR modal index"},
      {"mode_ir.confinement", KeyType::real, "0.1", 1e-9, 1.0, "IR confinement G"},
      {"mode_ir.detuning_mev", KeyType::real, "0", -1e3, 1e3,
       "cavity mode detuning omega_c - omega (meV)"},
      {"mode_ir.volume_um3", KeyType::real, "60000", 0.0, 1e12, "cavity volume (um^3)"},
      {"mode_opt1.loss_cm", KeyType::real, "150", 1e-6, 1e6,
       "optical 1 intensity loss (cm^-1)"},
      {"mode_opt1.mu", KeyType::real, "3.3", 0.1, 20.0, "optical 1 modal index"},
      {"mode_opt1.confinement", KeyType::real, "0.1", 1e-9, 1.0, "optical 1 G"},
      {"mode_opt2.loss_cm", KeyType::real, "150", 1e-6, 1e6,
       "optical 2 intensity loss (cm^-1)"},
      {"mode_opt2.mu", KeyType::real, "3.3", 0.1, 20.0, "optical 2 modal index"},
      {"mode_opt2.confinement", KeyType::real, "0.1", 1e-9, 1.0, "optical 2 G"},
      {"geometry.length_um", KeyType::real, "2000", 1.0, 1e6, "device length (um)"},
      {"geometry.facet_area_um2", KeyType::real, "30", 1e-3, 1e6,
       "facet area (um^2)"},
      {"geometry.out_coupling", KeyType::real, "0.05", 0.0, 1.0,
       "out-coupled fraction of the photon flux"},
      {"solver.beta", KeyType::real, "0.5", 1e-4, 1.0, "fixed-point mixing cap"},
      {"solver.max_iter", KeyType::integer, "500", 1, 1e6, "fixed-point iteration cap"},
      {"solver.rtol", KeyType::real, "1e-8", 1e-14, 1e-2,
       "fixed-point relative residual"},
  };
  return schema;
}

namespace {

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : config_schema())
    if (key == k.key) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view v, const KeySpec& spec, int line) {
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(x)) {
    std::ostringstream os;
    os << "config line " << line << ": '" << spec.key << "' expects a number, got '"
       << s << "'";
    throw ValidationError(os.str());
  }
  if (x < spec.min || x > spec.max) {
    std::ostringstream os;
    os << "config line " << line << ": '" << spec.key << "' = " << x
       << " outside [" << spec.min << ", " << spec.max << "]";
    throw ValidationError(os.str());
  }
  return x;
}

void store(const KeySpec& spec, std::string_view value, int line,
           std::map<std::string, double>& reals, std::map<std::string, long>& ints,
           std::map<std::string, std::string>& texts) {
  switch (spec.type) {
    case KeyType::real:
      reals[spec.key] = parse_real(value, spec, line);
      return;
    case KeyType::integer: {
      const double x = parse_real(value, spec, line);
      if (x != std::floor(x)) {
        std::ostringstream os;
        os << "config line " << line << ": '" << spec.key << "' expects an integer";
        throw ValidationError(os.str());
      }
      ints[spec.key] = static_cast<long>(x);
      return;
    }
    case KeyType::text: {
      texts[spec.key] = std::string(value);
      return;
    }
  }
}

BroadeningKind parse_kind(const std::string& s) {
  if (s == "homogeneous") return BroadeningKind::homogeneous;
  if (s == "gaussian") return BroadeningKind::gaussian;
  if (s == "lorentzian") return BroadeningKind::lorentzian;
  throw ValidationError("config: broadening.kind must be homogeneous, gaussian or "
                        "lorentzian, got '" + s + "'");
}

}  // namespace

double ScenarioConfig::real(const std::string& key) const {
  const auto it = reals_.find(key);
  if (it == reals_.end()) throw ContractError("config: no real key '" + key + "'");
  return it->second;
}
long ScenarioConfig::integer(const std::string& key) const {
  const auto it = ints_.find(key);
  if (it == ints_.end()) throw ContractError("config: no integer key '" + key + "'");
  return it->second;
}
const std::string& ScenarioConfig::text(const std::string& key) const {
  const auto it = texts_.find(key);
  if (it == texts_.end()) throw ContractError("config: no text key '" + key + "'");
  return it->second;
}

void ScenarioConfig::set_real(const std::string& key, double value) {
  const KeySpec* spec = find_key(key);
  if (!spec || spec->type != KeyType::real)
    throw ValidationError("config: cannot set non-real key '" + key + "'");
  if (value < spec->min || value > spec->max) {
    std::ostringstream os;
    os << "config: '" << key << "' = " << value << " outside [" << spec->min << ", "
       << spec->max << "]";
    throw ValidationError(os.str());
  }
  reals_[key] = value;
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::map<std::string, int> seen;  // key -> first line number

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::ostringstream os;
      os << "config line " << line_no << ": expected 'key = value'";
      throw ValidationError(os.str());
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const KeySpec* spec = find_key(key);
    if (!spec) {
      std::ostringstream os;
      os << "config line " << line_no << ": unknown key '" << key << "'";
      throw ValidationError(os.str());
    }
    const auto dup = seen.find(key);
    if (dup != seen.end()) {
      std::ostringstream os;
      os << "config: duplicate key '" << key << "' at lines " << dup->second << " and "
         << line_no;
      throw ValidationError(os.str());
    }
    seen[key] = line_no;
    store(*spec, value, line_no, cfg.reals_, cfg.ints_, cfg.texts_);
  }

  for (const auto& spec : config_schema()) {
    if (seen.count(spec.key)) continue;
    store(spec, spec.default_text, 0, cfg.reals_, cfg.ints_, cfg.texts_);
    cfg.provenance_.push_back(std::string("default: ") + spec.key + " = " +
                              spec.default_text);
  }

  // Cross-key validation the type constructors enforce; surfaced here so a
  // bad file fails at parse time.
  BroadeningSpec(parse_kind(cfg.text("broadening.kind")), cfg.real("broadening.u21_mev"),
                 cfg.real("broadening.u31_mev"), cfg.real("broadening.u32_mev"),
                 static_cast<int>(cfg.integer("broadening.nodes")),
                 cfg.real("broadening.cutoff"));
  LevelScheme(cfg.real("levels.e1_mev"), cfg.real("levels.e2_mev"),
              cfg.real("levels.e3_mev"));
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<double> sweep_values(const ScenarioConfig& cfg, const SweepSpec& sweep) {
  const KeySpec* spec = find_key(sweep.param);
  if (!spec) throw ValidationError("sweep: unknown key '" + sweep.param + "'");
  if (spec->type != KeyType::real)
    throw ValidationError("sweep: '" + sweep.param + "' is not a real-valued key");
  if (sweep.steps < 2) throw ValidationError("sweep: steps must be >= 2");
  if (sweep.log_scale && !(sweep.from > 0.0 && sweep.to > 0.0))
    throw ValidationError("sweep: log scale requires positive endpoints");
  (void)cfg;

  std::vector<double> values(sweep.steps);
  for (int i = 0; i < sweep.steps; ++i) {
    const double t = static_cast<double>(i) / (sweep.steps - 1);
    values[i] = sweep.log_scale
                    ? sweep.from * std::pow(sweep.to / sweep.from, t)
                    : sweep.from + t * (sweep.to - sweep.from);
  }
  return values;
}

}  // namespace triwave
