#include "phasepairs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <fftw3.h>
#include <Eigen/Eigenvalues>

#include "phasepairs/errors.hpp"

namespace phasepairs {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_same_dim(const AtomSum& a, const AtomSum& b) {
  if (a.dim() != b.dim()) throw DimensionError("functions have different dimensions");
}

// Smallest eigenvalue of Re M, the decay rate of |atom| in every direction.
double decay_rate(const GaussAtom& atom) {
  const Mat re = atom.width.real();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (re + re.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double unit_ball_volume(int d) {
  return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace

GridSpec GridSpec::spanning(const Vec& lower, const Vec& upper, const std::vector<int>& counts) {
  if (lower.size() != upper.size() || static_cast<std::size_t>(lower.size()) != counts.size())
    throw DimensionError("grid bounds and counts disagree on dimension");
  Vec step(lower.size());
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (counts[i] < 1) throw DomainError("grid needs at least one point per axis");
    step(i) = counts[i] > 1 ? (upper(i) - lower(i)) / (counts[i] - 1) : 1.0;
  }
  return {lower, step, counts};
}

std::size_t GridSpec::total() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(c);
  return n;
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
  std::vector<int> k(counts.size());
  for (std::size_t i = counts.size(); i-- > 0;) {
    k[i] = static_cast<int>(flat % counts[i]);
    flat /= counts[i];
  }
  return k;
}

Vec GridSpec::point(std::size_t flat) const {
  const auto k = unflatten(flat);
  Vec t = origin;
  for (int i = 0; i < dim(); ++i) t(i) += step(i) * k[i];
  return t;
}

GridSpec probe_grid(const AtomSum& f, int per_axis) {
  const int d = f.dim();
  Vec lo = Vec::Constant(d, -1.0), hi = Vec::Constant(d, 1.0);
  bool first = true;
  for (const auto& a : f.atoms()) {
    const double reach = 4.0 / std::sqrt(decay_rate(a));
    const Vec alo = a.center.array() - reach, ahi = a.center.array() + reach;
    lo = first ? alo : Vec(lo.cwiseMin(alo));
    hi = first ? ahi : Vec(hi.cwiseMax(ahi));
    first = false;
  }
  return GridSpec::spanning(lo, hi, std::vector<int>(d, per_axis));
}

double spectrogram(const AtomSum& f, const AtomSum& g, const Vec& z) {
  require_same_dim(f, g);
  const int d = f.dim();
  if (z.size() != 2 * d) throw DimensionError("phase-space point has wrong dimension");
  return std::abs(stft(f, g, z.head(d), z.tail(d)));
}

EqualityReport compare_spectrograms(const AtomSum& f1, const AtomSum& f2, const AtomSum& g,
                                    const std::vector<Vec>& points, double tol) {
  if (points.empty()) throw DomainError("equality check needs at least one point");
  EqualityReport r;
  r.n_points = static_cast<int>(points.size());
  r.tol = tol;
  std::vector<std::pair<double, double>> vals;
  vals.reserve(points.size());
  for (const auto& z : points) {
    const double a = spectrogram(f1, g, z), b = spectrogram(f2, g, z);
    vals.emplace_back(a, b);
    r.reference_scale = std::max({r.reference_scale, a, b});
  }
  r.worst_point = points.front();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [a, b] = vals[i];
    const double diff = std::abs(a - b);
    if (diff > r.max_abs_diff) {
      r.max_abs_diff = diff;
      r.worst_point = points[i];
    }
    const double local = std::max(a, b);
    if (local > 1e-12 * r.reference_scale && local > 0)
      r.max_pointwise_rel_diff = std::max(r.max_pointwise_rel_diff, diff / local);
  }
  r.max_rel_diff = r.reference_scale > 0 ? r.max_abs_diff / r.reference_scale : 0.0;
  r.passed = r.max_rel_diff <= tol;
  return r;
}

EqualityReport check_equality_on_set(const CounterexamplePair& pair, const std::vector<Vec>& points,
                                     double tol) {
  return compare_spectrograms(pair.f1, pair.f2, pair.window, points, tol);
}

double phase_distance(const AtomSum& f1, const AtomSum& f2) {
  require_same_dim(f1, f2);
  const double n1 = inner_product(f1, f1).real(), n2 = inner_product(f2, f2).real();
  return std::max(0.0, n1 + n2 - 2.0 * std::abs(inner_product(f1, f2)));
}

double QxGrid::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<double> qx_values(const CounterexamplePair& pair, const Vec& x, const std::vector<Vec>& omegas) {
  std::vector<double> out;
  out.reserve(omegas.size());
  for (const auto& w : omegas) {
    const double a = std::norm(stft(pair.f1, pair.window, x, w));
    const double b = std::norm(stft(pair.f2, pair.window, x, w));
    out.push_back(std::abs(a - b));
  }
  return out;
}

QxGrid qx_grid(const CounterexamplePair& pair, const Vec& x, const GridSpec& omega_grid) {
  if (x.size() != pair.window.dim() || omega_grid.dim() != pair.window.dim())
    throw DimensionError("qx grid dimension differs from the pair");
  std::vector<Vec> omegas;
  omegas.reserve(omega_grid.total());
  for (std::size_t i = 0; i < omega_grid.total(); ++i) omegas.push_back(omega_grid.point(i));
  return {omega_grid, qx_values(pair, x, omegas)};
}

double periodization_tail(const AtomSum& phi_hat, const Lattice& lat, double r) {
  const int d = lat.dim();
  const double diam = lat.generator().colwise().norm().sum();
  std::vector<std::pair<double, double>> env;  // (|c|, decay rate) per atom
  std::vector<double> centres;
  for (const auto& a : phi_hat.atoms()) {
    env.emplace_back(std::abs(a.amp), decay_rate(a));
    centres.push_back(a.center.norm());
  }
  auto envelope = [&](double rho) {
    double e = 0.0;
    for (std::size_t j = 0; j < env.size(); ++j) {
      const double gap = std::max(0.0, rho - centres[j]);
      e += env[j].first * std::exp(-kPi * env[j].second * gap * gap);
    }
    return e;
  };
  // lattice points in a shell of radius rho number at most density * vol(B(rho + diam))
  const double per_volume = density(lat) * unit_ball_volume(d);
  double tail = 0.0;
  for (int n = 0; n < 100000; ++n) {
    const double rho = r + n;
    const double e = envelope(rho);
    const double term = e * e * per_volume * std::pow(rho + 1.0 + diam, d);
    tail += term;
    if (rho > 2.0 * (r + 1.0) && term <= 1e-30 * tail) return tail;
  }
  return std::numeric_limits<double>::infinity();
}

PeriodizationBounds periodization_bounds(const AtomSum& phi, const Lattice& lat, int m, double r) {
  if (m < 8) throw DomainError("periodization_bounds needs m >= 8");
  if (phi.dim() != lat.dim()) throw DimensionError("function and lattice dimensions differ");
  const AtomSum phi_hat = fourier(phi);
  const auto ts = fundamental_domain_grid(lat, m);
  double reach = 0.0;
  for (const auto& t : ts) reach = std::max(reach, t.norm());
  const auto lambdas = enumerate(lat, r + reach);
  PeriodizationBounds b;
  b.lower = std::numeric_limits<double>::infinity();
  for (const auto& t : ts) {
    double sum = 0.0;
    for (const auto& l : lambdas) {
      const Vec w = t + l;
      if (w.norm() <= r) sum += std::norm(eval(phi_hat, w));
    }
    b.lower = std::min(b.lower, sum);
    b.upper = std::max(b.upper, sum);
  }
  b.tail_bound = periodization_tail(phi_hat, lat, r);
  if (!(b.tail_bound < 1e-14 * b.upper)) {
    double need = std::max(1.0, r);
    while (!(periodization_tail(phi_hat, lat, need) < 1e-14 * b.upper) && need < 1e6) need *= 1.25;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "periodization truncation radius %.6g too small for a 1e-14 tail; need about %.6g", r,
                  need);
    throw DomainError(buf);
  }
  b.lower_flagged = b.lower < kPeriodizationFlag;
  return b;
}

cplx bargmann(const AtomSum& f, cplx z) {
  if (f.dim() != 1) throw DimensionError("bargmann transform is implemented for d = 1");
  const double pref = std::pow(2.0, 0.25);
  cplx sum = 0.0;
  for (const auto& a : f.atoms()) {
    const cplx m = a.width(0, 0);
    const double c0 = a.center(0), b0 = a.freq(0);
    const cplx q = m + 1.0;
    const cplx w = m * c0 + kI * b0 + z;
    const cplx exponent = kPi * w * w / q - kPi * m * c0 * c0 - kPi * z * z / 2.0;
    sum += pref * a.amp * std::exp(exponent) / std::sqrt(q);
  }
  return sum;
}

double bargmann_residual(const AtomSum& f, const std::vector<Vec>& points) {
  if (f.dim() != 1) throw DimensionError("bargmann residual is implemented for d = 1");
  const AtomSum phi = std::pow(2.0, 0.25) * standard_gaussian(1);
  double worst = 0.0;
  for (const auto& p : points) {
    if (p.size() != 2) throw DimensionError("bargmann points are (x, omega) pairs");
    const double x = p(0), w = p(1);
    const double lhs = std::abs(stft(f, phi, Vec::Constant(1, x), Vec::Constant(1, -w)));
    const double rhs = std::exp(-kPi * (x * x + w * w) / 2.0) * std::abs(bargmann(f, cplx(x, w)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

SampledWindow SampledWindow::from_atoms(const AtomSum& f, const GridSpec& grid) {
  if (f.dim() != grid.dim()) throw DimensionError("grid and function dimensions differ");
  return from_function([&](const Vec& t) { return eval(f, t); }, grid);
}

SampledWindow SampledWindow::from_function(const std::function<cplx(const Vec&)>& fn, const GridSpec& grid) {
  for (Eigen::Index i = 0; i < grid.step.size(); ++i)
    if (!(grid.step(i) > 0)) throw DomainError("sampled window needs a positive step");
  SampledWindow w{grid, {}};
  w.values.resize(grid.total());
  for (std::size_t i = 0; i < grid.total(); ++i) w.values[i] = fn(grid.point(i));
  return w;
}

std::vector<Vec> canonical_frequencies(const GridSpec& grid) {
  GridSpec freq;
  freq.counts = grid.counts;
  freq.origin.resize(grid.dim());
  freq.step.resize(grid.dim());
  for (int i = 0; i < grid.dim(); ++i) {
    const int n = grid.counts[i];
    freq.step(i) = 1.0 / (n * grid.step(i));
    freq.origin(i) = -(n / 2) * freq.step(i);
  }
  std::vector<Vec> out;
  out.reserve(freq.total());
  for (std::size_t i = 0; i < freq.total(); ++i) out.push_back(freq.point(i));
  return out;
}

std::vector<cplx> stft_numeric(const SampledWindow& f, const SampledWindow& g, const Vec& x,
                               const std::vector<Vec>& omegas) {
  const GridSpec& grid = f.grid;
  const int d = grid.dim();
  if (g.grid.counts != grid.counts || (g.grid.origin - grid.origin).cwiseAbs().maxCoeff() > 1e-12 ||
      (g.grid.step - grid.step).cwiseAbs().maxCoeff() > 1e-15)
    throw DomainError("stft_numeric: sampled functions must share one grid");
  if (x.size() != d) throw DimensionError("time point has wrong dimension");
  std::vector<int> shift(d);
  for (int i = 0; i < d; ++i) {
    const double s = x(i) / grid.step(i);
    if (std::abs(s - std::round(s)) > 1e-9) throw DomainError("stft_numeric: x is not on the grid");
    shift[i] = static_cast<int>(std::lround(s));
  }

  // product f(t) conj(g(t - x)), zero where the shifted window leaves the grid
  std::vector<cplx> prod(grid.total());
  for (std::size_t flat = 0; flat < grid.total(); ++flat) {
    const auto k = grid.unflatten(flat);
    std::size_t src = 0;
    bool inside = true;
    for (int i = 0; i < d; ++i) {
      const int j = k[i] - shift[i];
      if (j < 0 || j >= grid.counts[i]) {
        inside = false;
        break;
      }
      src = src * grid.counts[i] + static_cast<std::size_t>(j);
    }
    prod[flat] = inside ? f.values[flat] * std::conj(g.values[src]) : cplx{};
  }
  double cell = 1.0;
  for (int i = 0; i < d; ++i) cell *= grid.step(i);

  const auto canon = canonical_frequencies(grid);
  bool use_fft = omegas.size() == canon.size();
  for (std::size_t i = 0; use_fft && i < canon.size(); ++i) {
    if (omegas[i].size() != d) throw DimensionError("frequency has wrong dimension");
    for (int j = 0; j < d; ++j)
      if (std::abs(omegas[i](j) - canon[i](j)) > 1e-9 / grid.step(j)) use_fft = false;
  }

  std::vector<cplx> out(omegas.size());
  if (use_fft) {
    std::vector<cplx> spec(grid.total());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(prod.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_plan plan = fftw_plan_dft(d, grid.counts.data(), in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    GridSpec freq_index{Vec::Zero(d), Vec::Ones(d), grid.counts};
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto j = freq_index.unflatten(i);
      std::size_t src = 0;
      for (int a = 0; a < d; ++a) {
        const int n = grid.counts[a];
        const int signed_j = j[a] - n / 2;
        src = src * n + static_cast<std::size_t>(((signed_j % n) + n) % n);
      }
      out[i] = cell * std::exp(-2.0 * kPi * kI * omegas[i].dot(grid.origin)) * spec[src];
    }
    return out;
  }
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i].size() != d) throw DimensionError("frequency has wrong dimension");
    cplx sum = 0.0;
    for (std::size_t flat = 0; flat < grid.total(); ++flat) {
      if (prod[flat] == cplx{}) continue;
      sum += prod[flat] * std::exp(-2.0 * kPi * kI * omegas[i].dot(grid.point(flat)));
    }
    out[i] = cell * sum;
  }
  return out;
}

double max_modulus_mismatch(const AtomSum& f1, const AtomSum& f2, const GridSpec& grid) {
  require_same_dim(f1, f2);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < grid.total(); ++i) {
    const Vec t = grid.point(i);
    const double a = std::abs(eval(f1, t));
    worst = std::max(worst, std::abs(a - std::abs(eval(f2, t))));
    scale = std::max(scale, a);
  }
  return scale > 0 ? worst / scale : worst;
}

bool modulus_equal_on_grid(const AtomSum& f1, const AtomSum& f2, const GridSpec& grid, double tol) {
  return max_modulus_mismatch(f1, f2, grid) <= tol;
}

double max_imag_ratio(const AtomSum& f, const GridSpec& grid) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < grid.total(); ++i) {
    const cplx v = eval(f, grid.point(i));
    worst = std::max(worst, std::abs(v.imag()));
    scale = std::max(scale, std::abs(v));
  }
  return scale > 0 ? worst / scale : worst;
}

bool is_real_on_grid(const AtomSum& f, const GridSpec& grid, double tol) {
  return max_imag_ratio(f, grid) <= tol;
}

}  // namespace phasepairs
