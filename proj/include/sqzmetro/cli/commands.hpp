#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sqzmetro/cli/config.hpp"
#include "sqzmetro/metrology.hpp"

namespace sqzmetro::cli {

/// Comment block heading every output file.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  std::string render() const;
};

struct SynthesisOutput {
  std::string netlist;
  std::string unitary;
  double unitarityResidual = 0.0;
  double firstColumnResidual = 0.0;  ///< |U e_1 - sqrt(w)|
};

SynthesisOutput cmd_synthesize(const WeightVector& weights);

struct SimulateOutput {
  std::string csv;
  metrology::EstimationResult result;
  metrology::RegimeCheck regime;
};

SimulateOutput cmd_simulate(const ConfigMap& config);

struct SweepOutput {
  std::string csv;
  metrology::SweepResult result;
};

/// `threads` never changes the output.
SweepOutput cmd_sweep(const ConfigMap& config, bool force);

}  // namespace sqzmetro::cli
