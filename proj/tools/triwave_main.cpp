// triwave: steady-state simulator for intracavity difference-frequency
// generation in a three-level medium driven by two optical laser fields.
//
//   triwave run    --config <path> [--output <path>] [--format csv|json]
//   triwave sweep  --config <path> --param <dotted.key> --from <v> --to <v>
//                  --steps <n> [--log] --output <path> [--format csv|json]
//   triwave verify --config <path>
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "triwave/emit.hpp"
#include "triwave/errors.hpp"
#include "triwave/verify.hpp"

namespace {

int exit_code_for(const triwave::Error& e) {
  return triwave::Error::is_numerical(e.kind()) ? 2 : 1;
}

void log_provenance(const triwave::ScenarioConfig& cfg) {
  for (const auto& line : cfg.provenance()) std::cerr << line << '\n';
}

void write_table(const triwave::Table& table, const std::string& output,
                 const std::string& format) {
  const auto fmt =
      format == "json" ? triwave::EmitFormat::json : triwave::EmitFormat::csv;
  if (output.empty()) {
    const std::string body = fmt == triwave::EmitFormat::csv
                                 ? triwave::emit_csv(table)
                                 : triwave::emit_json(table);
    std::fwrite(body.data(), 1, body.size(), stdout);
  } else {
    triwave::emit_file(table, fmt, output);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state three-color difference-frequency generation"};
  app.require_subcommand(1);

  std::string config_path, output_path, format = "csv";

  auto* run = app.add_subcommand("run", "solve one scenario and emit a record");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--output", output_path, "output file (default: stdout)");
  run->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  triwave::SweepSpec sweep;
  auto* sw = app.add_subcommand("sweep", "sweep one parameter across scenarios");
  sw->add_option("--config", config_path, "scenario config file")->required();
  sw->add_option("--param", sweep.param, "dotted config key to sweep")->required();
  sw->add_option("--from", sweep.from, "first value")->required();
  sw->add_option("--to", sweep.to, "last value")->required();
  sw->add_option("--steps", sweep.steps, "number of steps (>= 2)")->required();
  sw->add_flag("--log", sweep.log_scale, "logarithmic spacing");
  sw->add_option("--output", output_path, "output file")->required();
  sw->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* ver = app.add_subcommand("verify", "run the built-in oracle suite");
  ver->add_option("--config", config_path, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = triwave::parse_config_file(config_path);
      log_provenance(cfg);
      const auto record = triwave::run_scenario(cfg);
      write_table(triwave::single_row_table(record), output_path, format);
      return 0;
    }
    if (sw->parsed()) {
      const auto cfg = triwave::parse_config_file(config_path);
      log_provenance(cfg);
      const auto table = triwave::run_sweep(cfg, sweep);
      write_table(table, output_path, format);
      return 0;
    }
    if (ver->parsed()) {
      const auto cfg = triwave::parse_config_file(config_path);  // validates
      log_provenance(cfg);
      const auto lines = triwave::verify::run_all();
      bool all_pass = true;
      for (const auto& line : lines) {
        all_pass = all_pass && line.pass;
        std::printf("[%s] %-45s %s\n", line.pass ? "PASS" : "FAIL",
                    line.name.c_str(), line.detail.c_str());
      }
      return all_pass ? 0 : 2;
    }
  } catch (const triwave::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
