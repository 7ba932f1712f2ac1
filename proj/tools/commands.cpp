#include "phasepairs/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "phasepairs/errors.hpp"
#include "phasepairs/png_writer.hpp"

namespace phasepairs {

namespace {

constexpr double kPhaseBoundFactor = 1e-6;
constexpr double kModulusTol = 1e-12;
constexpr double kRealTol = 1e-10;
constexpr double kNodeTol = 1e-10;
constexpr double kOffSetMinDiff = 1e-3;

json report_json(const EqualityReport& r) {
  return json{{"n_points", r.n_points},           {"max_abs_diff", r.max_abs_diff},
              {"max_rel_diff", r.max_rel_diff},   {"reference_scale", r.reference_scale},
              {"max_pointwise_rel_diff", r.max_pointwise_rel_diff},
              {"worst_point", to_json(r.worst_point)}, {"tol", r.tol}, {"passed", r.passed}};
}

json pair_json(const CounterexamplePair& pair) {
  const Certificate& c = pair.certificate;
  return json{{"scenario_type", pair.scenario},
              {"certificate",
               {{"seq_in_l2o", c.seq_in_l2o},
                {"seq_hermitian", c.seq_hermitian},
                {"phase_distance", c.phase_distance},
                {"norm_sq_sum", c.norm_sq_sum}}},
              {"equality_set", to_json(pair.equality_set)},
              {"sequence", to_json(pair.sequence)},
              {"time_shift", to_json(pair.time_shift)},
              {"freq_shift", to_json(pair.freq_shift)},
              {"window", to_json(pair.window)},
              {"f1", to_json(pair.f1)},
              {"f2", to_json(pair.f2)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

CounterexamplePair build_from(const RunConfig& cfg) {
  CounterexamplePair pair = build(cfg.scenario, cfg.window, cfg.coefficients());
  if (cfg.verify.perturbation != 0.0) pair = perturbed(pair, cfg.verify.perturbation);
  return pair;
}

json header(const char* command, const RunConfig& cfg) {
  json j{{"tool", "phasepairs"}, {"command", command}, {"scenario", cfg.scenario_echo}};
  if (!cfg.note.empty()) j["note"] = cfg.note;
  return j;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

VerifyOutcome run_verification(const RunConfig& cfg, double tol) {
  const CounterexamplePair pair = build_from(cfg);
  const auto points = equality_points(pair, cfg.verify.points, cfg.verify.radius);
  if (points.empty()) throw ConfigError("verify: empty point list");

  VerifyOutcome out;
  json& r = out.report;
  r = header("verify", cfg);
  r["perturbation"] = cfg.verify.perturbation;
  r["pair"] = pair_json(pair);

  const EqualityReport eq = check_equality_on_set(pair, points, tol);
  r["equality"] = report_json(eq);
  bool ok = eq.passed;

  const double bound = kPhaseBoundFactor * pair.certificate.norm_sq_sum;
  const bool phase_ok = pair.certificate.phase_distance >= bound;
  r["phase_distance"] = {{"value", pair.certificate.phase_distance}, {"bound", bound}, {"passed", phase_ok}};
  ok = ok && phase_ok;

  const EqualityReport off =
      compare_spectrograms(pair.f1, pair.f2, pair.window,
                           off_set_probes(pair, cfg.verify.points, cfg.verify.radius), tol);
  r["off_set_probes"] = {{"max_pointwise_rel_diff", off.max_pointwise_rel_diff},
                         {"max_rel_diff", off.max_rel_diff},
                         {"worst_point", to_json(off.worst_point)},
                         {"distinguishes", off.max_pointwise_rel_diff > kOffSetMinDiff}};

  const GridSpec probe = probe_grid(pair.f1, cfg.verify.probe_points);
  if (pair.expects_equal_modulus) {
    const double m = max_modulus_mismatch(pair.f1, pair.f2, probe);
    r["modulus_equality"] = {{"max_rel_mismatch", m}, {"tol", kModulusTol}, {"passed", m <= kModulusTol}};
    ok = ok && m <= kModulusTol;
  }
  if (pair.expects_real) {
    const double m = std::max(max_imag_ratio(pair.f1, probe), max_imag_ratio(pair.f2, probe));
    r["real_valued"] = {{"max_imag_ratio", m}, {"tol", kRealTol}, {"passed", m <= kRealTol}};
    ok = ok && m <= kRealTol;
  }
  r["passed"] = ok;
  out.passed = ok;
  return out;
}

std::vector<Vec> slice_nodes(const EqualitySet& set, const Vec& x, const Vec& lower, const Vec& upper) {
  const int d = set.dim();
  if (x.size() != d) throw DimensionError("slice point has wrong dimension");
  if ((set.transform - Mat::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff() > 1e-12) return {};
  const Vec centre = set.shift.tail(d);
  const double reach = std::max((lower - centre).norm(), (upper - centre).norm()) +
                       (upper - lower).norm();
  std::vector<Vec> out;
  const double slack = 1e-12 * std::max(1.0, (upper - lower).cwiseAbs().maxCoeff());
  for (const auto& p : enumerate(Lattice(set.discrete_gen), reach)) {
    const Vec w = p + centre;
    if (((w - lower).array() >= -slack).all() && ((upper - w).array() >= -slack).all()) out.push_back(w);
  }
  return out;
}

GridOutcome run_grid(const CounterexamplePair& pair, const GridConfig& spec) {
  GridOutcome out;
  out.grid = qx_grid(pair, spec.x, GridSpec::spanning(spec.omega_min, spec.omega_max, spec.resolution));
  out.grid_max = out.grid.max();
  out.nodes = slice_nodes(pair.equality_set, spec.x, spec.omega_min, spec.omega_max);
  for (double q : qx_values(pair, spec.x, out.nodes)) out.node_max = std::max(out.node_max, q);
  return out;
}

void write_grid_csv(const std::filesystem::path& path, const QxGrid& grid) {
  std::string text;
  for (int i = 0; i < grid.grid.dim(); ++i) text += "omega_" + std::to_string(i + 1) + ",";
  text += "qx\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.grid.total(); ++i) {
    const Vec w = grid.grid.point(i);
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", w(j));
      text += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", grid.values[i]);
    text += buf;
  }
  write_text(path, text);
}

int cmd_build(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const CounterexamplePair pair = build(cfg.scenario, cfg.window, cfg.coefficients());
  json r = header("build", cfg);
  r["pair"] = pair_json(pair);
  const auto path = opts.out_dir / cfg.output.report;
  write_json(path, r);
  log << "built " << pair.scenario << ": phase_distance=" << fmt(pair.certificate.phase_distance)
      << " seq_in_l2o=" << (pair.certificate.seq_in_l2o ? "true" : "false") << " -> " << path.string() << "\n";
  return kExitPass;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const VerifyOutcome v = run_verification(cfg, opts.tol.value_or(cfg.verify.tol));
  const auto path = opts.out_dir / cfg.output.report;
  write_json(path, v.report);
  log << (v.passed ? "PASS" : "FAIL") << " verify: max_rel_diff="
      << fmt(v.report["equality"]["max_rel_diff"].get<double>())
      << " phase_distance=" << fmt(v.report["phase_distance"]["value"].get<double>()) << " -> "
      << path.string() << "\n";
  return v.passed ? kExitPass : kExitFail;
}

int cmd_grid(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  if (!cfg.grid) throw ConfigError("grid: the config has no 'grid' section");
  const CounterexamplePair pair = build_from(cfg);
  const GridOutcome g = run_grid(pair, *cfg.grid);
  const auto csv = opts.out_dir / cfg.output.grid_csv;
  write_grid_csv(csv, g.grid);
  log << "grid " << g.grid.values.size() << " values, max=" << fmt(g.grid_max) << ", " << g.nodes.size()
      << " nodes, node max=" << fmt(g.node_max) << " -> " << csv.string() << "\n";
  if (opts.png) {
    if (pair.window.dim() == 2) {
      const auto png = opts.out_dir / cfg.output.grid_png;
      write_contour_png(png, g.grid, g.nodes);
      log << "contour image -> " << png.string() << "\n";
    } else {
      log << "png skipped: contour images need d = 2\n";
    }
  }
  return kExitPass;
}

int cmd_repro(const std::string& name, const CommandOptions& opts, std::ostream& log) {
  const auto configs = builtin_configs(name);
  bool all_ok = true;
  for (const auto& [tag, doc] : configs) {
    RunConfig cfg = parse_config(doc);
    cfg.output = {tag + "_report.json", tag + "_qx.csv", tag + "_qx.png"};
    VerifyOutcome v = run_verification(cfg, opts.tol.value_or(cfg.verify.tol));
    bool ok = v.passed;
    const bool distinguishes = v.report["off_set_probes"]["distinguishes"].get<bool>();
    ok = ok && distinguishes;
    v.report["command"] = "repro";
    v.report["repro"] = tag;
    if (cfg.grid) {
      const CounterexamplePair pair = build_from(cfg);
      const GridOutcome g = run_grid(pair, *cfg.grid);
      write_grid_csv(opts.out_dir / cfg.output.grid_csv, g.grid);
      if (opts.png) write_contour_png(opts.out_dir / cfg.output.grid_png, g.grid, g.nodes);
      const double ratio = g.grid_max > 0 ? g.node_max / g.grid_max : 0.0;
      const bool nodes_ok = !g.nodes.empty() && ratio <= kNodeTol;
      v.report["grid"] = {{"x", to_json(cfg.grid->x)},
                          {"nodes", g.nodes.size()},
                          {"grid_max", g.grid_max},
                          {"node_max", g.node_max},
                          {"node_ratio", ratio},
                          {"passed", nodes_ok}};
      ok = ok && nodes_ok;
    }
    v.report["passed"] = ok;
    write_json(opts.out_dir / cfg.output.report, v.report);
    log << (ok ? "PASS " : "FAIL ") << tag << ": max_rel_diff="
        << fmt(v.report["equality"]["max_rel_diff"].get<double>()) << " off_set_diff="
        << fmt(v.report["off_set_probes"]["max_pointwise_rel_diff"].get<double>());
    if (v.report.contains("grid")) log << " node_ratio=" << fmt(v.report["grid"]["node_ratio"].get<double>());
    log << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? kExitPass : kExitFail;
}

int cmd_lattice_info(const json& doc, const CommandOptions& opts, std::ostream& log) {
  if (!doc.is_object()) throw ConfigError("lattice-info: expected an object");
  for (const auto& item : doc.items())
    if (item.key() != "lattice" && item.key() != "rational" && item.key() != "radius" &&
        item.key() != "fundamental_domain")
      throw ConfigError("lattice-info: unknown key '" + item.key() + "'");
  if (doc.contains("lattice") == doc.contains("rational"))
    throw ConfigError("lattice-info: give exactly one of 'lattice' or 'rational'");
  json r{{"tool", "phasepairs"}, {"command", "lattice-info"}};
  Mat gen;
  if (doc.contains("rational")) {
    const RationalMatrix q = parse_rational_matrix(doc.at("rational"), "rational");
    gen = to_matrix(q);
    r["envelope"] = to_json(rational_envelope(q).generator());
  } else {
    gen = parse_real_matrix(doc.at("lattice"), "lattice");
  }
  const Lattice lat(gen);
  const LatticeClass cls = classify(lat);
  r["generator"] = to_json(lat.generator());
  r["reciprocal"] = to_json(reciprocal(lat).generator());
  r["density"] = density(lat);
  r["class"] = {{"kind", cls.name()}};
  if (cls.kind == LatticeClass::Kind::Symplectic) {
    r["class"]["alpha"] = cls.alpha;
    r["class"]["symplectic"] = to_json(cls.symplectic);
  }
  if (doc.contains("radius")) {
    if (!doc.at("radius").is_number()) throw ConfigError("lattice-info: radius must be a number");
    json pts = json::array();
    for (const auto& p : enumerate(lat, doc.at("radius").get<double>())) pts.push_back(to_json(p));
    r["points"] = std::move(pts);
  }
  if (doc.contains("fundamental_domain")) {
    if (!doc.at("fundamental_domain").is_number_integer())
      throw ConfigError("lattice-info: fundamental_domain must be an integer");
    json pts = json::array();
    for (const auto& p : fundamental_domain_grid(lat, doc.at("fundamental_domain").get<int>()))
      pts.push_back(to_json(p));
    r["fundamental_domain"] = std::move(pts);
  }
  const auto path = opts.out_dir / "lattice_info.json";
  write_json(path, r);
  log << r.dump(2) << "\n";
  return kExitPass;
}

int guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitConfig;
}

}  // namespace phasepairs

namespace phasepairs {

namespace {

const char* const kExampleI = R"({
  "note": "shifts (0,0), (8,0), (0,8) taken on the shift lattice 8Z^2 so that they lie in it",
  "window": {"gaussian": {"dim": 2, "exponent": 1.0}},
  "scenario": {"type": "semi_discrete", "lattice": [[0.125, 0], [0, 0.125]]},
  "sequence": {"entries": [{"index": [0, 0], "value": [1, 0]},
                           {"index": [1, 0], "value": [0, 1]},
                           {"index": [0, 1], "value": [1, 1]}]},
  "verify": {"points": 50, "radius": 10, "tol": 1e-9},
  "grid": {"x": [2.6666666666666665, 2.6666666666666665], "omega_min": [-0.5, -0.5],
           "omega_max": [0.5, 0.5], "resolution": 201}
})";

const char* const kExampleII = R"({
  "window": {"gaussian": {"dim": 2, "exponent": 1.0}},
  "scenario": {"type": "semi_discrete",
               "shift_lattice": [[5, 0], [-2.886751345948129, 5.773502691896258]]},
  "sequence": {"entries": [{"index": [0, 0], "value": [1, 0]},
                           {"index": [1, 0], "value": [0, 1]},
                           {"index": [0, 1], "value": [1, 1]}]},
  "verify": {"points": 50, "radius": 10, "tol": 1e-9},
  "grid": {"x": [1.6666666666666667, 0.9622504486493763], "omega_min": [-0.6, -0.6],
           "omega_max": [0.6, 0.6], "resolution": 201}
})";

const char* const kPauli = R"({
  "window": {"gaussian": {"dim": 2, "exponent": 1.0}},
  "scenario": {"type": "pauli_separable", "A": [[1, 0.5], [0, 1]], "B": [[0.5, 0], [0.25, 0.5]]},
  "verify": {"points": 50, "radius": 4, "tol": 1e-9}
})";

const char* const kRealSign = R"({
  "window": {"gaussian": {"dim": 2, "exponent": 1.0}},
  "scenario": {"type": "real_sign", "lattice": [[0.5, 0], [0, 0.5]]},
  "verify": {"points": 50, "radius": 4, "tol": 1e-9}
})";

const char* const kRational1 = R"({
  "note": "narrow window so the atoms on the coarse shift lattice overlap in the spectrogram",
  "window": {"gaussian": {"dim": 1, "exponent": 10.0}},
  "scenario": {"type": "rational_lattice", "L": [[[1, 2], [1, 3]], [0, [1, 5]]]},
  "verify": {"points": 50, "radius": 6, "tol": 1e-9}
})";

const char* const kRational2 = R"({
  "note": "narrow window so the atoms on the coarse shift lattice overlap in the spectrogram",
  "window": {"gaussian": {"dim": 2, "exponent": 10.0}},
  "scenario": {"type": "rational_lattice",
               "L": [[[1, 2], [1, 3], 0, 0], [0, [1, 5], 0, [1, 7]],
                     [[1, 3], 0, [1, 2], 0], [0, [1, 4], 0, [1, 3]]]},
  "verify": {"points": 50, "radius": 3, "tol": 1e-9}
})";

}  // namespace

std::vector<std::string> repro_names() { return {"example-i", "example-ii", "pauli", "real-sign", "rational"}; }

std::vector<std::pair<std::string, json>> builtin_configs(const std::string& name) {
  if (name == "example-i") {
    json second = json::parse(kExampleI);
    second["grid"]["x"] = {4.0, 0.0};
    return {{"example_i", json::parse(kExampleI)}, {"example_i_x4", std::move(second)}};
  }
  if (name == "example-ii") {
    json four = json::parse(kExampleII);
    four["sequence"]["entries"].push_back({{"index", {1, 1}}, {"value", {0.5, 0.5}}});
    four["grid"]["x"] = {2.5, 1.4433756729740645};
    return {{"example_ii_f2", json::parse(kExampleII)}, {"example_ii_f3", std::move(four)}};
  }
  if (name == "pauli") return {{"pauli", json::parse(kPauli)}};
  if (name == "real-sign") return {{"real_sign", json::parse(kRealSign)}};
  if (name == "rational") return {{"rational_d1", json::parse(kRational1)}, {"rational_d2", json::parse(kRational2)}};
  std::string known;
  for (const auto& n : repro_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("repro: unknown name '" + name + "' (known: " + known + ")");
}

}  // namespace phasepairs
