#include "sqzmetro/cli/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sqzmetro/cli/commands.hpp"
#include "sqzmetro/cli/config.hpp"
#include "sqzmetro/errors.hpp"
#include "sqzmetro/format.hpp"

namespace sqzmetro::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
  std::optional<int> cutoff;
  std::optional<std::string> baseline;
  std::optional<std::string> model;
  std::optional<int> threads;
  std::string out_path;
  bool force = false;
  std::string level = "quick";
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("config,--config", o.config_path, "Config file (key = value lines)");
  sub->add_option("--out", o.out_path, "Write results to this path instead of stdout");
}

ConfigMap resolve_config(const Options& o) {
  ConfigMap cfg = o.config_path.empty() ? ConfigMap{} : ConfigMap::load(o.config_path);
  cfg.apply_environment([](const char* name) { return std::getenv(name); });
  if (o.seed) cfg.set("seed", std::to_string(*o.seed));
  if (o.engine) cfg.set("engine", *o.engine);
  if (o.cutoff) cfg.set("cutoff", std::to_string(*o.cutoff));
  if (o.baseline) cfg.set("baseline", *o.baseline);
  if (o.model) cfg.set("model", *o.model);
  if (o.threads) cfg.set("threads", std::to_string(*o.threads));
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_file(o.out_path, text);
  }
}

WeightVector synthesis_weights(const Options& o) {
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ValidationError("cannot read weights file '" + o.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find('=') == std::string::npos) {
      std::string data;
      std::istringstream lines(text);
      for (std::string line; std::getline(lines, line);) {
        if (line.find('#') != std::string::npos) line.erase(line.find('#'));
        data += line + '\n';
      }
      return WeightVector(parse_list(data));
    }
  }
  return to_weights(resolve_config(o));
}

int run_synthesize(const Options& o, std::ostream& out, std::ostream& err) {
  const auto s = cmd_synthesize(synthesis_weights(o));
  if (o.out_path.empty()) {
    out << s.netlist << s.unitary;
  } else {
    write_file(o.out_path, s.netlist);
    write_file(o.out_path + ".unitary", s.unitary);
  }
  err << "unitarity_residual=" << format_double(s.unitarityResidual)
      << " first_column_residual=" << format_double(s.firstColumnResidual) << '\n';
  return kExitOk;
}

int run_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto s = cmd_simulate(resolve_config(o));
  if (!s.regime.ok) {
    err << "warning: |phi|max*nbar = " << format_double(s.regime.ratio)
        << " is outside the small-phase regime; the estimate is biased\n";
  }
  emit(o, out, s.csv);
  return kExitOk;
}

int run_sweep(const Options& o, std::ostream& out, std::ostream&) {
  const auto s = cmd_sweep(resolve_config(o), o.force);
  emit(o, out, s.csv);
  return kExitOk;
}

int run_validate(const Options& o, std::ostream& out, const ValidationHooks& hooks) {
  const auto level = o.level == "full" ? ValidationLevel::full : ValidationLevel::quick;
  const auto report = run_validation(level, hooks);
  std::ostringstream text;
  for (const auto& c : report.checks) text << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  if (const auto* f = report.first_failure()) {
    text << "validation failed: " << f->name << '\n';
  } else {
    text << "validation passed (" << o.level << ")\n";
  }
  emit(o, out, text.str());
  return report.passed() ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const ValidationHooks& hooks) {
  CLI::App app{"Distributed phase estimation with a single squeezed vacuum probe"};
  app.set_version_flag("--version", SQZMETRO_VERSION);
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synthesize", "Build the weight-encoding network and its mesh netlist");
  add_common(synth, o);

  auto* sim = app.add_subcommand("simulate", "Evaluate the protocol and simulate one detection run");
  add_common(sim, o);
  sim->add_option("--seed", o.seed, "Master seed");
  sim->add_option("--engine", o.engine, "gaussian or fock");
  sim->add_option("--cutoff", o.cutoff, "Photon-number cutoff for the fock engine (even)");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sensitivity sweep over mean photon numbers");
  add_common(sweep, o);
  sweep->add_option("--seed", o.seed, "Master seed");
  sweep->add_option("--baseline", o.baseline, "none or coherent");
  sweep->add_option("--model", o.model, "leading, quadratic or exact");
  sweep->add_option("--threads", o.threads, "Worker threads (output does not depend on it)");
  sweep->add_flag("--force", o.force, "Run points outside the small-phase regime");

  auto* val = app.add_subcommand("validate", "Run the cross-engine and identity checks");
  val->add_option("level", o.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  val->add_option("--out", o.out_path, "Write the report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg_out, msg_err;
    const int code = app.exit(e, msg_out, msg_err);
    out << msg_out.str();
    err << msg_err.str();
    return code == 0 ? kExitOk : kExitBadInput;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*synth) code = run_synthesize(o, out, err);
    if (*sim) code = run_simulate(o, out, err);
    if (*sweep) code = run_sweep(o, out, err);
    if (*val) code = run_validate(o, out, hooks);
  } catch (const RegimeViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitRegimeRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << "elapsed_s=" << format_double(std::round(elapsed.count() * 1000.0) / 1000.0) << '\n';
  return code;
}

}  // namespace sqzmetro::cli
