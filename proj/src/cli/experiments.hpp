#pragma once

#include "config.hpp"
#include "output.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qsa::cli {

struct RunContext {
  const Config& cfg;
  OutputDir& out;
  unsigned jobs = 1;
};

struct Experiment {
  std::string name;
  std::string description;
  Schema schema;
  std::function<void(RunContext&)> run;
};

const std::vector<Experiment>& registry();
const Experiment* find_experiment(std::string_view name);

}  // namespace qsa::cli
