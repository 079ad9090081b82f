#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triwave/cavity.hpp"
#include "triwave/config.hpp"

// Scenario execution: one record per steady-state solve, aggregating the
// self-consistent field, every closed-form evaluation whose gate admits it
// (others emit NaN with the gate flag down), phase matching, conversion-cap
// bookkeeping and output power. Records are deterministic: identical config
// gives bit-identical values.

namespace triwave {

struct Record {
  double e_abs_mev = 0.0, e_re_mev = 0.0, e_im_mev = 0.0;
  double intensity_w_cm2 = 0.0;
  double photon_flux_cm2s = 0.0;
  double flux_opt1_cm2s = 0.0, flux_opt2_cm2s = 0.0;
  bool cap_applied = false;
  bool converged = false;
  long iterations = 0;
  bool weak_gate = false;
  double n23_node_min = 0.0, n23_node_max = 0.0;
  double eta_1 = 0.0, eta_2 = 0.0;
  double ir_weak_mev = 0.0;
  bool ir_weak_gate = false;
  double ir_homog_mev = 0.0;
  bool ir_homog_gate = false;
  double ir_inhomog_mev = 0.0;
  double ir_inhomog_intensity_ratio = 0.0;
  bool ir_inhomog_gate = false;
  double ir_holeburn_mev = 0.0;
  bool ir_holeburn_gate = false;
  double delta_k_per_um = 0.0;
  bool phase_matched = false;
  double power_mw = 0.0;
};

enum class ColumnType { real, integer, flag };
struct ColumnDef {
  const char* name;
  ColumnType type;
  double (*get)(const Record&);
};
const std::vector<ColumnDef>& record_columns();

struct Table {
  std::optional<std::string> swept_key;  // first column when present
  std::vector<double> swept_values;
  std::vector<Record> rows;
};

Record run_scenario(const ScenarioConfig& cfg, Exec exec = Exec::parallel);

Table run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep,
                Exec exec = Exec::parallel);

inline Table single_row_table(const Record& r) {
  Table t;
  t.rows.push_back(r);
  return t;
}

}  // namespace triwave
