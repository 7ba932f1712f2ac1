// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "phasepairs/commands.hpp"
#include "phasepairs/errors.hpp"

using namespace phasepairs;

namespace {

constexpr double kEqualityTol = 1e-9;
constexpr double kPhaseFactor = 1e-6;
constexpr double kOffSetMin = 1e-3;
constexpr double kNodeTol = 1e-10;
constexpr double kModulusTol = 1e-12;
constexpr double kRealTol = 1e-10;
constexpr double kIdentityTol = 1e-9;
constexpr double kQuadratureTol = 1e-8;
constexpr double kNumericTol = 1e-6;
constexpr double kConvergenceRatio = 4.0;
constexpr double kBargmannTol = 1e-9;
constexpr double kScalingTol = 1e-10;
constexpr double kCriterion1Seconds = 5.0;
constexpr double kCriterion3Seconds = 30.0;

struct Line {
  bool ok = true;
  std::string detail;
  void require(bool cond, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Line::require(bool cond, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!cond) {
    ok = false;
    detail += " [FAIL]";
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig config(const std::string& name, std::size_t which = 0) {
  return parse_config(builtin_configs(name).at(which).second);
}

CounterexamplePair pair_of(const RunConfig& cfg) { return build(cfg.scenario, cfg.window, cfg.coefficients()); }

// Outcomes checked for criteria 1-5, reused by the scaling criterion.
struct Outcome {
  bool equality = false;
  bool phase = false;
  bool off_set = false;
  bool modulus = true;
  bool real = true;
  bool nodes = true;
  double max_rel = 0, phase_ratio = 0, off_diff = 0, modulus_err = 0, imag_ratio = 0, node_ratio = 0;
  bool operator==(const Outcome& o) const {
    return equality == o.equality && phase == o.phase && off_set == o.off_set && modulus == o.modulus &&
           real == o.real && nodes == o.nodes;
  }
};

Outcome evaluate(const RunConfig& cfg) {
  Outcome o;
  const CounterexamplePair pair = pair_of(cfg);
  const auto pts = equality_points(pair, cfg.verify.points, cfg.verify.radius);
  const EqualityReport eq = check_equality_on_set(pair, pts, kEqualityTol);
  o.max_rel = eq.max_rel_diff;
  o.equality = pts.size() == static_cast<std::size_t>(cfg.verify.points) && eq.max_rel_diff <= kEqualityTol;
  const double n1 = norm(pair.f1), n2 = norm(pair.f2);
  o.phase_ratio = phase_distance(pair.f1, pair.f2) / (n1 * n1 + n2 * n2);
  o.phase = o.phase_ratio >= kPhaseFactor;
  o.off_diff =
      compare_spectrograms(pair.f1, pair.f2, pair.window, off_set_probes(pair, cfg.verify.points, cfg.verify.radius),
                           kEqualityTol)
          .max_pointwise_rel_diff;
  o.off_set = o.off_diff > kOffSetMin;
  const GridSpec probe = probe_grid(pair.f1, 41);
  if (pair.expects_equal_modulus) {
    o.modulus_err = max_modulus_mismatch(pair.f1, pair.f2, probe);
    o.modulus = o.modulus_err <= kModulusTol;
  }
  if (pair.expects_real) {
    o.imag_ratio = std::max(max_imag_ratio(pair.f1, probe), max_imag_ratio(pair.f2, probe));
    o.real = o.imag_ratio <= kRealTol;
  }
  if (cfg.grid) {
    const GridOutcome g = run_grid(pair, *cfg.grid);
    o.node_ratio = g.node_max / g.grid_max;
    o.nodes = !g.nodes.empty() && o.node_ratio <= kNodeTol;
  }
  return o;
}

Line criterion1() {
  Line l;
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = config("example-i");
  const CounterexamplePair pair = pair_of(cfg);
  const auto pts = equality_points(pair, 50, cfg.verify.radius);
  const EqualityReport eq = check_equality_on_set(pair, pts, kEqualityTol);
  const double secs = seconds_since(t0);
  bool lattice_ok = true;
  for (const auto& z : pts) lattice_ok = lattice_ok && contains(Lattice::scaled_integer(2, 0.125), Vec(z.tail(2)));
  l.require(pts.size() == 50 && lattice_ok, "%zu points on R^2 x (1/8)Z^2", pts.size());
  l.require(eq.max_rel_diff <= kEqualityTol, "max_rel_diff=%.3e (tol %.0e)", eq.max_rel_diff, kEqualityTol);
  l.require(secs < kCriterion1Seconds, "%.3fs", secs);
  return l;
}

Line criterion2() {
  Line l;
  const RunConfig cfg = config("example-i");
  const CounterexamplePair pair = pair_of(cfg);
  const double n1 = norm(pair.f1), n2 = norm(pair.f2);
  const double pd = phase_distance(pair.f1, pair.f2), bound = kPhaseFactor * (n1 * n1 + n2 * n2);
  l.require(pd >= bound, "phase_distance=%.6g >= %.3e", pd, bound);
  const EqualityReport off =
      compare_spectrograms(pair.f1, pair.f2, pair.window, off_set_probes(pair, 50, cfg.verify.radius), kEqualityTol);
  l.require(off.max_pointwise_rel_diff > kOffSetMin, "off-lattice relative difference %.3e > %.0e",
            off.max_pointwise_rel_diff, kOffSetMin);
  const Vec probe{{4.0, 0.0, 1.0 / 16, 0.0}};
  const double a = spectrogram(pair.f1, pair.window, probe), b = spectrogram(pair.f2, pair.window, probe);
  l.require(std::abs(a - b) > kOffSetMin * std::max(a, b), "at (4,0,1/16,0): %.3e vs %.3e", a, b);
  return l;
}

Line criterion3() {
  Line l;
  for (std::size_t which : {0u, 1u}) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = config("example-ii", which);
    const CounterexamplePair pair = pair_of(cfg);
    const GridOutcome g = run_grid(pair, *cfg.grid);
    const double secs = seconds_since(t0);
    const double ratio = g.node_max / g.grid_max;
    l.require(g.grid.values.size() == 201u * 201u && !g.nodes.empty() && ratio <= kNodeTol,
              "%s: %zu terms, %zu nodes, node/max=%.3e", which ? "f3" : "f2", pair.f1.size(), g.nodes.size(), ratio);
    l.require(secs < kCriterion3Seconds, "%.2fs", secs);
  }
  return l;
}

Line criterion4() {
  Line l;
  const Outcome o = evaluate(config("pauli"));
  l.require(o.equality, "equality max_rel=%.3e", o.max_rel);
  l.require(o.modulus, "modulus mismatch=%.3e on 41^2", o.modulus_err);
  l.require(o.phase, "phase_distance/norms=%.3e", o.phase_ratio);
  return l;
}

Line criterion5() {
  Line l;
  const Outcome o = evaluate(config("real-sign"));
  l.require(o.real, "max|Im|/max|f|=%.3e", o.imag_ratio);
  l.require(o.equality, "equality max_rel=%.3e", o.max_rel);
  l.require(o.phase, "phase_distance/norms=%.3e", o.phase_ratio);
  return l;
}

Line criterion6() {
  Line l;
  for (std::size_t which : {0u, 1u}) {
    const json doc = builtin_configs("rational").at(which).second;
    const RunConfig cfg = parse_config(doc);
    const RationalMatrix gen = parse_rational_matrix(doc["scenario"]["L"], "L");
    const Mat lm = to_matrix(gen);
    const Lattice env = rational_envelope(gen);
    const int n = static_cast<int>(lm.rows());
    // exhaustive z in {-3..3}^n
    bool contained = true;
    std::vector<int> z(n, -3);
    for (;;) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v(i) = z[i];
      contained = contained && contains(env, lm * v);
      int i = 0;
      while (i < n && ++z[i] > 3) z[i++] = -3;
      if (i == n) break;
    }
    const CounterexamplePair pair = pair_of(cfg);
    const auto pts = equality_points(pair, 50, cfg.verify.radius);
    bool on_lattice = pts.size() == 50;
    for (const auto& p : pts) on_lattice = on_lattice && contains(Lattice(lm), p);
    const Outcome o = evaluate(cfg);
    l.require(contained && on_lattice && o.equality && o.phase && o.off_set,
              "d=%d: envelope ok=%d, max_rel=%.3e, phase/norms=%.3e, off=%.3e", n / 2, contained, o.max_rel,
              o.phase_ratio, o.off_diff);
  }
  return l;
}

Line criterion7() {
  Line l;
  oracle::Rng rng(7001);
  double cov = 0, conj_fourier = 0, fourier_shift = 0, reflect_shift = 0, interaction = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 2;
    const AtomSum f = oracle::random_sum(rng, d), g = oracle::random_sum(rng, d);
    const Vec tau = rng.vec(d, -1, 1), nu = rng.vec(d, -1, 1), x = rng.vec(d, -1, 1), w = rng.vec(d, -1, 1);
    const cplx lhs = stft(translate(modulate(f, nu), tau), g, x, w);
    const cplx rhs = std::exp(cplx(0, -2 * M_PI * tau.dot(w))) * stft(f, g, x - tau, w - nu);
    cov = std::max(cov, std::abs(lhs - rhs));
    const Vec t = rng.vec(d, -1.5, 1.5);
    conj_fourier = std::max(conj_fourier, std::abs(std::conj(fourier(f)(t)) - reflect(fourier(conjugate(f)))(t)));
    fourier_shift = std::max(fourier_shift, std::abs(fourier(translate(f, tau))(t) - modulate(fourier(f), -tau)(t)));
    reflect_shift = std::max(reflect_shift, std::abs(reflect(translate(f, tau))(t) - translate(reflect(f), -tau)(t)));
    interaction = std::max(interaction, interaction_residual(oracle::random_word(rng, d, 3), f, g, rng.vec(2 * d, -1, 1)));
  }
  l.require(cov <= kIdentityTol, "covariance %.2e", cov);
  l.require(conj_fourier <= kIdentityTol, "conj/Fourier %.2e", conj_fourier);
  l.require(fourier_shift <= kIdentityTol, "Fourier/translation %.2e", fourier_shift);
  l.require(reflect_shift <= kIdentityTol, "reflection/translation %.2e", reflect_shift);
  l.require(interaction <= kIdentityTol, "symplectic interaction %.2e", interaction);
  return l;
}

double numeric_error(const AtomSum& f, const AtomSum& g, double h, double half_width, const Vec& x) {
  const int n = static_cast<int>(std::lround(2 * half_width / h));
  const GridSpec grid{Vec::Constant(1, -half_width), Vec::Constant(1, h), {n}};
  const auto freqs = canonical_frequencies(grid);
  const auto v = stft_numeric(SampledWindow::from_atoms(f, grid), SampledWindow::from_atoms(g, grid), x, freqs);
  double worst = 0, scale = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const cplx e = stft(f, g, x, freqs[i]);
    worst = std::max(worst, std::abs(v[i] - e));
    scale = std::max(scale, std::abs(e));
  }
  return worst / scale;
}

Line criterion8() {
  Line l;
  oracle::Rng rng(8001);
  double inner_err = 0, stft_err = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 2;
    const AtomSum f = oracle::random_sum(rng, d, 2), g = oracle::random_sum(rng, d, 2);
    const double scale = norm(f) * norm(g);
    inner_err = std::max(inner_err, std::abs(inner_product(f, g) - oracle::inner(f, g)) / scale);
    const Vec x = rng.vec(d, -1, 1), w = rng.vec(d, -1, 1);
    stft_err = std::max(stft_err, std::abs(stft(f, g, x, w) - oracle::stft(f, g, x, w)) / scale);
  }
  l.require(inner_err <= kQuadratureTol, "inner vs quadrature %.2e", inner_err);
  l.require(stft_err <= kQuadratureTol, "stft vs quadrature %.2e", stft_err);

  const Vec x = Vec::Constant(1, 0.125);
  const AtomSum smooth_f = modulate(translate(isotropic_gaussian(1, 1.0), Vec::Constant(1, 0.3)), Vec::Constant(1, 0.5));
  const double smooth = numeric_error(smooth_f, isotropic_gaussian(1, 1.0), 1.0 / 64, 8.0, x);
  l.require(smooth <= kNumericTol, "e^{-t^2} at h=1/64 %.2e", smooth);
  // e^{-250 t^2}: sampling error is still visible at h = 1/64, so the refinement gain is measurable
  const AtomSum narrow_g = isotropic_gaussian(1, 250.0);
  const AtomSum narrow_f = modulate(translate(narrow_g, Vec::Constant(1, 0.1)), Vec::Constant(1, 3.0));
  const double coarse = numeric_error(narrow_f, narrow_g, 1.0 / 64, 4.0, x);
  const double fine = numeric_error(narrow_f, narrow_g, 1.0 / 128, 4.0, x);
  l.require(coarse <= kNumericTol, "e^{-250t^2} at h=1/64 %.2e", coarse);
  l.require(coarse >= kConvergenceRatio * fine, "h=1/128 %.2e (gain %.1e)", fine, coarse / fine);
  return l;
}

Line criterion9() {
  Line l;
  oracle::Rng rng(9001);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const AtomSum f = oracle::random_sum(rng, 1);
    std::vector<Vec> pts;
    for (int k = 0; k < 20; ++k) pts.push_back(rng.vec(2, -1.5, 1.5));
    worst = std::max(worst, bargmann_residual(f, pts));
  }
  l.require(worst <= kBargmannTol, "max residual %.2e over 10 sums x 20 points", worst);
  return l;
}

Line criterion10() {
  Line l;
  const std::vector<std::pair<std::string, std::size_t>> cases{
      {"example-i", 0}, {"example-ii", 0}, {"example-ii", 1}, {"pauli", 0}, {"real-sign", 0}};
  bool preserved = true;
  for (const auto& [name, which] : cases) {
    const Outcome base = evaluate(config(name, which));
    for (double kappa : {0.5, 2.0, 10.0}) {
      RunConfig cfg = config(name, which);
      cfg.sequence_scale = kappa;
      preserved = preserved && evaluate(cfg) == base;
    }
  }
  l.require(preserved, "pass/fail outcomes of criteria 1-5 unchanged for kappa in {0.5, 2, 10}");

  double worst = 0;
  for (const auto& [name, which] : cases) {
    RunConfig cfg = config(name, which);
    const int d = cfg.window.dim();
    GridConfig grid;
    if (cfg.grid) {
      grid = *cfg.grid;
      grid.resolution.assign(d, 41);
    } else {
      grid = GridConfig{Vec::Constant(d, 0.3), Vec::Constant(d, -1.0), Vec::Constant(d, 1.0), std::vector<int>(d, 41)};
    }
    const GridSpec spec = GridSpec::spanning(grid.omega_min, grid.omega_max, grid.resolution);
    const CounterexamplePair base = pair_of(cfg);
    const QxGrid q = qx_grid(base, grid.x, spec);
    // Qx is a difference of spectrograms, so roundoff is measured against their size
    double scale = q.max();
    for (std::size_t i = 0; i < spec.total(); ++i)
      scale = std::max({scale, std::norm(stft(base.f1, base.window, grid.x, spec.point(i))),
                        std::norm(stft(base.f2, base.window, grid.x, spec.point(i)))});
    for (double kappa : {0.5, 2.0, 10.0}) {
      cfg.sequence_scale = kappa;
      const QxGrid qs = qx_grid(pair_of(cfg), grid.x, spec);
      for (std::size_t i = 0; i < q.values.size(); ++i)
        worst = std::max(worst, std::abs(qs.values[i] - kappa * kappa * q.values[i]) / (kappa * kappa * scale));
    }
  }
  l.require(worst <= kScalingTol, "Qx scaling error %.2e", worst);
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria{
      {"1 spectrogram equality, first example", criterion1},
      {"2 non-equivalence certificate", criterion2},
      {"3 hexagonal example nodes", criterion3},
      {"4 modulus-preserving pair", criterion4},
      {"5 real-valued pair", criterion5},
      {"6 rational lattices", criterion6},
      {"7 operator identities", criterion7},
      {"8 closed form vs quadrature and FFT", criterion8},
      {"9 Bargmann cross-check", criterion9},
      {"10 cone scaling", criterion10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Line line;
    try {
      line = fn();
    } catch (const std::exception& e) {
      line.ok = false;
      line.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %s: %s\n", line.ok ? "PASS" : "FAIL", name, line.detail.c_str());
    std::fflush(stdout);
    failures += !line.ok;
  }
  return failures == 0 ? 0 : 1;
}
