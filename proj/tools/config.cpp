#include "phasepairs/config.hpp"

#include <fstream>
#include <initializer_list>
#include <memory>

#include "phasepairs/errors.hpp"

namespace phasepairs {

namespace {

void expect(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw ConfigError(where + ": " + what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  expect(j.is_object(), where, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    expect(known, where, "unknown key '" + item.key() + "'");
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  expect(j.contains(key), where, std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  expect(j.is_number(), where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  expect(j.is_number_integer(), where, "expected an integer");
  return j.get<int>();
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  expect(j.is_array() && j.size() == 2, where, "expected a number or [re, im]");
  return {number(j[0], where), number(j[1], where)};
}

Vec vector_of(const json& j, const std::string& where, Eigen::Index expected = -1) {
  expect(j.is_array(), where, "expected an array of numbers");
  if (expected >= 0)
    expect(static_cast<Eigen::Index>(j.size()) == expected, where,
           "expected length " + std::to_string(expected));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], where);
  return v;
}

template <typename Scalar, typename Entry>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rows_of(const json& j, const std::string& where,
                                                              Entry&& entry) {
  expect(j.is_array() && !j.empty(), where, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  expect(j[0].is_array(), where, "matrices are written as arrays of rows");
  const auto m = static_cast<Eigen::Index>(j[0].size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    expect(row.is_array() && static_cast<Eigen::Index>(row.size()) == m, where, "ragged matrix rows");
    for (Eigen::Index c = 0; c < m; ++c) out(r, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

Mat square(const Mat& m, int dim, const std::string& where) {
  expect(m.rows() == dim && m.cols() == dim, where,
         "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  return m;
}

}  // namespace

Mat parse_real_matrix(const json& j, const std::string& where) {
  return rows_of<double>(j, where, [&](const json& e) { return number(e, where); });
}

CMat parse_complex_matrix(const json& j, const std::string& where) {
  return rows_of<cplx>(j, where, [&](const json& e) { return complex_value(e, where); });
}

RationalMatrix parse_rational_matrix(const json& j, const std::string& where) {
  expect(j.is_array() && !j.empty(), where, "expected rows of rationals");
  RationalMatrix out;
  for (const auto& row : j) {
    expect(row.is_array() && row.size() == j.size(), where, "rational matrix must be square");
    std::vector<Rational> r;
    for (const auto& e : row) {
      if (e.is_number_integer()) {
        r.push_back({e.get<long long>(), 1});
        continue;
      }
      expect(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer(), where,
             "rational entries are integers or [numerator, denominator]");
      r.push_back({e[0].get<long long>(), e[1].get<long long>()});
      expect(r.back().den != 0, where, "zero denominator");
    }
    out.push_back(std::move(r));
  }
  return out;
}

SympWord parse_word(const json& j, int dim) {
  const std::string where = "scenario.word";
  expect(j.is_array(), where, "expected a list of generators");
  std::vector<Generator> gens;
  for (const auto& g : j) {
    const std::string type = field(g, "type", where).is_string() ? g.at("type").get<std::string>() : "";
    if (type == "dilate") {
      check_keys(g, {"type", "matrix"}, where);
      gens.push_back(Dilate{square(parse_real_matrix(field(g, "matrix", where), where), dim, where)});
    } else if (type == "fourier") {
      check_keys(g, {"type", "sign"}, where);
      const int sign = g.contains("sign") ? integer(g.at("sign"), where) : -1;
      expect(sign == 1 || sign == -1, where, "fourier sign must be +1 or -1");
      gens.push_back(FourierJ{sign});
    } else if (type == "chirp") {
      check_keys(g, {"type", "matrix"}, where);
      gens.push_back(Chirp{square(parse_real_matrix(field(g, "matrix", where), where), dim, where)});
    } else {
      throw ConfigError(where + ": generator type must be dilate, fourier or chirp");
    }
  }
  return SympWord(dim, std::move(gens));
}

Scenario parse_scenario(const json& j, int dim) {
  const std::string where = "scenario";
  expect(j.is_object() && j.contains("type") && j.at("type").is_string(), where, "needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  auto word = [&]() { return j.contains("word") ? parse_word(j.at("word"), dim) : SympWord(dim); };
  auto mat = [&](const char* key) {
    return square(parse_real_matrix(field(j, key, where), where + "." + key), dim, where + "." + key);
  };
  if (type == "semi_discrete") {
    check_keys(j, {"type", "word", "lattice", "shift_lattice"}, where);
    expect(j.contains("lattice") != j.contains("shift_lattice"), where,
           "give exactly one of 'lattice' (sampling) or 'shift_lattice'");
    if (j.contains("lattice")) return Scenario{SemiDiscrete{word(), Lattice(mat("lattice"))}};
    return Scenario{SemiDiscrete{word(), reciprocal(Lattice(mat("shift_lattice")))}};
  }
  if (type == "factored_lattice") {
    check_keys(j, {"type", "word", "A", "B"}, where);
    return Scenario{FactoredLattice{word(), Lattice(mat("A")).generator(), Lattice(mat("B")).generator()}};
  }
  if (type == "any_lattice_2d") {
    check_keys(j, {"type", "L"}, where);
    expect(dim == 1, where, "any_lattice_2d needs a one-dimensional window");
    return Scenario{AnyLattice2D{square(parse_real_matrix(field(j, "L", where), where + ".L"), 2, where)}};
  }
  if (type == "pauli_separable") {
    check_keys(j, {"type", "A", "B"}, where);
    return Scenario{PauliSeparable{Lattice(mat("A")).generator(), Lattice(mat("B")).generator()}};
  }
  if (type == "real_sign") {
    check_keys(j, {"type", "lattice"}, where);
    return Scenario{RealSign{Lattice(mat("lattice"))}};
  }
  if (type == "rational_lattice") {
    check_keys(j, {"type", "L"}, where);
    RationalMatrix l = parse_rational_matrix(field(j, "L", where), where + ".L");
    expect(static_cast<int>(l.size()) == 2 * dim, where, "rational generator must be 2d x 2d");
    return Scenario{RationalLattice{std::move(l)}};
  }
  if (type == "shifted") {
    check_keys(j, {"type", "base", "p"}, where);
    auto base = std::make_shared<const Scenario>(parse_scenario(field(j, "base", where), dim));
    return Scenario{Shifted{std::move(base), vector_of(field(j, "p", where), where + ".p", 2 * dim)}};
  }
  throw ConfigError(where + ": unknown scenario type '" + type + "'");
}

AtomSum parse_window(const json& j) {
  const std::string where = "window";
  check_keys(j, {"atoms", "gaussian"}, where);
  expect(j.contains("atoms") != j.contains("gaussian"), where, "give exactly one of 'atoms' or 'gaussian'");
  if (j.contains("gaussian")) {
    const json& g = j.at("gaussian");
    check_keys(g, {"dim", "exponent"}, where + ".gaussian");
    return isotropic_gaussian(integer(field(g, "dim", where), where + ".gaussian.dim"),
                              number(field(g, "exponent", where), where + ".gaussian.exponent"));
  }
  const json& atoms = j.at("atoms");
  expect(atoms.is_array() && !atoms.empty(), where, "'atoms' must be a non-empty list");
  std::vector<GaussAtom> out;
  for (const auto& a : atoms) {
    const std::string aw = where + ".atoms";
    check_keys(a, {"amp", "center", "freq", "width"}, aw);
    Vec center = vector_of(field(a, "center", aw), aw + ".center");
    const auto d = center.size();
    expect(d > 0, aw, "empty centre");
    Vec freq = a.contains("freq") ? vector_of(a.at("freq"), aw + ".freq", d) : Vec::Zero(d);
    const cplx amp = a.contains("amp") ? complex_value(a.at("amp"), aw + ".amp") : cplx(1.0);
    CMat width = parse_complex_matrix(field(a, "width", aw), aw + ".width");
    expect(width.rows() == d && width.cols() == d, aw, "width must be d x d");
    out.push_back(GaussAtom{amp, std::move(center), std::move(freq), std::move(width)});
  }
  const int d = out.front().dim();
  return AtomSum(d, std::move(out));
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, {"window", "scenario", "sequence", "verify", "grid", "output", "note"}, "config");
  AtomSum window = parse_window(field(doc, "window", "config"));
  const int d = window.dim();
  RunConfig cfg(window, parse_scenario(field(doc, "scenario", "config"), d));
  cfg.scenario_echo = doc.at("scenario");

  if (doc.contains("sequence")) {
    const json& s = doc.at("sequence");
    check_keys(s, {"entries", "scale"}, "sequence");
    if (s.contains("entries")) {
      CoeffSeq::Entries entries;
      expect(s.at("entries").is_array(), "sequence.entries", "expected a list");
      for (const auto& e : s.at("entries")) {
        check_keys(e, {"index", "value"}, "sequence.entries");
        const json& idx = field(e, "index", "sequence.entries");
        expect(idx.is_array() && static_cast<int>(idx.size()) == d, "sequence.entries.index",
               "index must have one integer per dimension");
        LatticeIndex k;
        for (const auto& v : idx) k.push_back(integer(v, "sequence.entries.index"));
        expect(!entries.count(k), "sequence.entries", "duplicate index");
        entries[k] = complex_value(field(e, "value", "sequence.entries"), "sequence.entries.value");
      }
      cfg.sequence = std::move(entries);
    }
    if (s.contains("scale")) {
      cfg.sequence_scale = number(s.at("scale"), "sequence.scale");
      expect(cfg.sequence_scale > 0, "sequence.scale", "scale must be positive");
    }
  }

  if (doc.contains("verify")) {
    const json& v = doc.at("verify");
    check_keys(v, {"points", "radius", "tol", "perturbation", "probe_points"}, "verify");
    if (v.contains("points")) cfg.verify.points = integer(v.at("points"), "verify.points");
    if (v.contains("radius")) cfg.verify.radius = number(v.at("radius"), "verify.radius");
    if (v.contains("tol")) cfg.verify.tol = number(v.at("tol"), "verify.tol");
    if (v.contains("perturbation")) cfg.verify.perturbation = number(v.at("perturbation"), "verify.perturbation");
    if (v.contains("probe_points")) cfg.verify.probe_points = integer(v.at("probe_points"), "verify.probe_points");
    expect(cfg.verify.points >= 1, "verify.points", "empty point list");
    expect(cfg.verify.radius >= 0, "verify.radius", "radius must be non-negative");
    expect(cfg.verify.tol > 0, "verify.tol", "tolerance must be positive");
    expect(cfg.verify.probe_points >= 2, "verify.probe_points", "need at least 2 probe points per axis");
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, {"x", "omega_min", "omega_max", "resolution"}, "grid");
    GridConfig gc;
    gc.x = vector_of(field(g, "x", "grid"), "grid.x", d);
    gc.omega_min = vector_of(field(g, "omega_min", "grid"), "grid.omega_min", d);
    gc.omega_max = vector_of(field(g, "omega_max", "grid"), "grid.omega_max", d);
    const json& res = field(g, "resolution", "grid");
    if (res.is_number_integer()) {
      gc.resolution.assign(d, res.get<int>());
    } else {
      expect(res.is_array() && static_cast<int>(res.size()) == d, "grid.resolution",
             "integer or one integer per axis");
      for (const auto& r : res) gc.resolution.push_back(integer(r, "grid.resolution"));
    }
    for (int r : gc.resolution) expect(r >= 2, "grid.resolution", "need at least 2 points per axis");
    for (int i = 0; i < d; ++i)
      expect(gc.omega_max(i) > gc.omega_min(i), "grid", "omega_max must exceed omega_min");
    cfg.grid = std::move(gc);
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, {"report", "grid_csv", "grid_png"}, "output");
    auto str = [&](const char* key, std::string& dst) {
      if (!o.contains(key)) return;
      expect(o.at(key).is_string(), std::string("output.") + key, "expected a file name");
      dst = o.at(key).get<std::string>();
    };
    str("report", cfg.output.report);
    str("grid_csv", cfg.output.grid_csv);
    str("grid_png", cfg.output.grid_png);
  }
  if (doc.contains("note")) {
    expect(doc.at("note").is_string(), "note", "expected a string");
    cfg.note = doc.at("note").get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::optional<CoeffSeq> RunConfig::coefficients() const {
  if (sequence) return CoeffSeq(shift_lattice(scenario), *sequence).scaled(sequence_scale);
  if (sequence_scale != 1.0) return default_sequence(scenario).scaled(sequence_scale);
  return std::nullopt;
}

json to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json to_json(const Mat& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(to_json(Vec(m.row(r).transpose())));
  return j;
}

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const AtomSum& f) {
  json atoms = json::array();
  for (const auto& a : f.atoms()) {
    json width = json::array();
    for (Eigen::Index r = 0; r < a.width.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < a.width.cols(); ++c) row.push_back(to_json(a.width(r, c)));
      width.push_back(std::move(row));
    }
    atoms.push_back(json{{"amp", to_json(a.amp)},
                         {"center", to_json(a.center)},
                         {"freq", to_json(a.freq)},
                         {"width", std::move(width)}});
  }
  return json{{"dim", f.dim()}, {"atoms", std::move(atoms)}};
}

json to_json(const CoeffSeq& s) {
  json entries = json::array();
  for (const auto& [k, c] : s.entries()) entries.push_back(json{{"index", k}, {"value", to_json(c)}});
  return json{{"lattice", to_json(s.lattice().generator())}, {"entries", std::move(entries)}};
}

json to_json(const EqualitySet& set) {
  // container: transform * (R^d x discrete Z^d) + shift, free coordinates first
  json j{{"form", set.lattice_gen ? "lattice" : "semi_discrete"},
         {"transform", to_json(set.transform)},
         {"discrete_generator", to_json(set.discrete_gen)},
         {"shift", to_json(set.shift)}};
  if (set.lattice_gen) j["lattice_generator"] = to_json(*set.lattice_gen);
  return j;
}

}  // namespace phasepairs
