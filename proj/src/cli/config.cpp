#include "sqzmetro/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sqzmetro/errors.hpp"
#include "sqzmetro/format.hpp"

namespace sqzmetro::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void require_known(std::string_view key) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
}

std::string require(const ConfigMap& config, const std::string& key) {
  auto v = config.get(key);
  if (!v) throw ValidationError("missing config key '" + key + "'");
  return *v;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "weights", "truePhases",      "squeeze",     "shots", "seed",     "engine",  "cutoff",
      "nbars",   "phiBarTimesNbar", "repetitions", "model", "baseline", "threads",
  };
  return keys;
}

std::string env_name(std::string_view key) {
  std::string out = "SQZMETRO_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

ConfigMap ConfigMap::parse(std::string_view text) {
  ConfigMap cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    require_known(key);
    if (cfg.has(key)) throw ValidationError("config key '" + key + "' given twice");
    cfg.values_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ConfigMap::set(const std::string& key, std::string value) {
  require_known(key);
  values_[key] = std::move(value);
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ConfigMap::apply_environment(const Getenv& getenv) {
  for (const auto& key : known_keys()) {
    if (const char* v = getenv(env_name(key).c_str())) values_[key] = trim(v);
  }
}

metrology::Engine parse_engine(std::string_view text) {
  if (text == "gaussian") return metrology::Engine::gaussian;
  if (text == "fock") return metrology::Engine::fock;
  throw ValidationError("engine must be gaussian or fock, got '" + std::string(text) + "'");
}

std::string to_string(metrology::Engine engine) {
  return engine == metrology::Engine::gaussian ? "gaussian" : "fock";
}

metrology::SweepModel parse_model(std::string_view text) {
  if (text == "leading") return metrology::SweepModel::leading;
  if (text == "quadratic") return metrology::SweepModel::quadratic;
  if (text == "exact") return metrology::SweepModel::exact;
  throw ValidationError("model must be leading, quadratic or exact, got '" + std::string(text) + "'");
}

std::string to_string(metrology::SweepModel model) {
  switch (model) {
    case metrology::SweepModel::leading:
      return "leading";
    case metrology::SweepModel::quadratic:
      return "quadratic";
    case metrology::SweepModel::exact:
      return "exact";
  }
  return "leading";
}

metrology::Probe parse_baseline(std::string_view text) {
  if (text == "none" || text == "squeezed") return metrology::Probe::squeezed;
  if (text == "coherent") return metrology::Probe::coherent;
  throw ValidationError("baseline must be none or coherent, got '" + std::string(text) + "'");
}

std::string to_string(metrology::Probe probe) { return probe == metrology::Probe::coherent ? "coherent" : "none"; }

SqueezeParameter parse_squeeze(std::string_view text) {
  const auto v = parse_list(text);
  if (v.empty() || v.size() > 2) throw ValidationError("squeeze must be 'r' or 'r,theta'");
  return v.size() == 1 ? SqueezeParameter(v[0]) : SqueezeParameter(v[0], v[1]);
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError(std::string(key) + " must be a non-negative integer, got '" + t + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError(std::string(key) + " must be an integer, got '" + t + "'");
  }
  return v;
}

WeightVector to_weights(const ConfigMap& config) { return WeightVector(parse_list(require(config, "weights"))); }

metrology::ExperimentConfig to_experiment(const ConfigMap& config) {
  metrology::ExperimentConfig e;
  e.weights = to_weights(config);
  e.truePhases = PhaseVector(parse_list(require(config, "truePhases")));
  e.squeeze = parse_squeeze(require(config, "squeeze"));
  if (auto v = config.get("shots")) e.shots = parse_u64("shots", *v);
  if (auto v = config.get("seed")) e.seed = parse_u64("seed", *v);
  if (auto v = config.get("engine")) e.engine = parse_engine(*v);
  if (auto v = config.get("cutoff")) e.cutoff = parse_int("cutoff", *v);
  metrology::validate(e);
  return e;
}

metrology::SweepConfig to_sweep(const ConfigMap& config) {
  metrology::SweepConfig s;
  if (auto v = config.get("nbars")) s.nbars = parse_list(*v);
  if (auto v = config.get("phiBarTimesNbar")) s.phiBarTimesNbar = parse_double(*v);
  if (auto v = config.get("shots")) s.shots = parse_u64("shots", *v);
  if (auto v = config.get("repetitions")) s.repetitions = parse_int("repetitions", *v);
  if (auto v = config.get("seed")) s.seed = parse_u64("seed", *v);
  if (auto v = config.get("model")) s.model = parse_model(*v);
  if (auto v = config.get("baseline")) s.probe = parse_baseline(*v);
  if (auto v = config.get("weights")) s.weights = WeightVector(parse_list(*v));
  if (auto v = config.get("threads")) s.threads = parse_int("threads", *v);
  return s;
}

}  // namespace sqzmetro::cli
