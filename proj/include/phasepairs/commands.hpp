#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phasepairs/config.hpp"
#include "phasepairs/verify.hpp"

namespace phasepairs {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<double> tol;
  bool png = false;
};

struct VerifyOutcome {
  json report;
  bool passed = false;
};
VerifyOutcome run_verification(const RunConfig& cfg, double tol);

// Lattice points of the equality set lying in the omega window of the slice at x.
// Only identity-transform sets have isolated nodes in a slice; other sets yield none.
std::vector<Vec> slice_nodes(const EqualitySet& set, const Vec& x, const Vec& lower, const Vec& upper);

struct GridOutcome {
  QxGrid grid;
  std::vector<Vec> nodes;
  double grid_max = 0.0;
  double node_max = 0.0;  // largest Qx at the nodes
};
GridOutcome run_grid(const CounterexamplePair& pair, const GridConfig& spec);

void write_grid_csv(const std::filesystem::path& path, const QxGrid& grid);

int cmd_build(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_grid(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_repro(const std::string& name, const CommandOptions& opts, std::ostream& log);
int cmd_lattice_info(const json& doc, const CommandOptions& opts, std::ostream& log);

std::vector<std::string> repro_names();
// (tag, config) pairs run by cmd_repro for the given name.
std::vector<std::pair<std::string, json>> builtin_configs(const std::string& name);

// Runs fn, mapping library and config exceptions to exit code 2 with a message on err.
int guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace phasepairs
