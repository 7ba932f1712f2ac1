#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "phasepairs/factory.hpp"

namespace phasepairs {

using json = nlohmann::ordered_json;

struct VerifySpec {
  int points = 50;
  double radius = 10.0;
  double tol = 1e-9;
  double perturbation = 0.0;
  int probe_points = 41;
};

struct GridConfig {
  Vec x;
  Vec omega_min;
  Vec omega_max;
  std::vector<int> resolution;
};

struct OutputSpec {
  std::string report = "report.json";
  std::string grid_csv = "qx.csv";
  std::string grid_png = "qx.png";
};

struct RunConfig {
  RunConfig(AtomSum w, Scenario sc) : window(std::move(w)), scenario(std::move(sc)) {}

  AtomSum window;
  Scenario scenario;
  json scenario_echo;
  std::optional<CoeffSeq::Entries> sequence;
  double sequence_scale = 1.0;
  VerifySpec verify;
  std::optional<GridConfig> grid;
  OutputSpec output;
  std::string note;

  // The explicit sequence on the scenario's shift lattice, scaled; nullopt means the default.
  std::optional<CoeffSeq> coefficients() const;
};

// Throws ConfigError on schema problems (unknown keys, wrong types, bad shapes).
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

Mat parse_real_matrix(const json& j, const std::string& where);
CMat parse_complex_matrix(const json& j, const std::string& where);
RationalMatrix parse_rational_matrix(const json& j, const std::string& where);
Scenario parse_scenario(const json& j, int dim);
SympWord parse_word(const json& j, int dim);
AtomSum parse_window(const json& j);

json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(cplx c);
json to_json(const AtomSum& f);
json to_json(const CoeffSeq& s);
json to_json(const EqualitySet& set);

}  // namespace phasepairs
