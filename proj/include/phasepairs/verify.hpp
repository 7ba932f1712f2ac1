#pragma once

#include <functional>
#include <vector>

#include "phasepairs/atoms.hpp"
#include "phasepairs/factory.hpp"
#include "phasepairs/lattice.hpp"

namespace phasepairs {

// Tensor grid origin + step .* k, 0 <= k_i < counts_i, flattened with the last axis fastest.
struct GridSpec {
  Vec origin;
  Vec step;
  std::vector<int> counts;

  static GridSpec spanning(const Vec& lower, const Vec& upper, const std::vector<int>& counts);

  int dim() const { return static_cast<int>(origin.size()); }
  std::size_t total() const;
  Vec point(std::size_t flat) const;
  std::vector<int> unflatten(std::size_t flat) const;
};

// Box covering every atom centre plus several widths, 'per_axis' points per axis.
GridSpec probe_grid(const AtomSum& f, int per_axis = 41);

struct EqualityReport {
  int n_points = 0;
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;
  double reference_scale = 0.0;
  // max |a-b| / max(a,b) over points above 1e-12 * reference_scale
  double max_pointwise_rel_diff = 0.0;
  Vec worst_point;
  double tol = 0.0;
  bool passed = false;
};

double spectrogram(const AtomSum& f, const AtomSum& g, const Vec& z);
EqualityReport compare_spectrograms(const AtomSum& f1, const AtomSum& f2, const AtomSum& g,
                                    const std::vector<Vec>& points, double tol);
EqualityReport check_equality_on_set(const CounterexamplePair& pair, const std::vector<Vec>& points,
                                     double tol);

// min over unimodular nu of |f1 - nu f2|^2
double phase_distance(const AtomSum& f1, const AtomSum& f2);

struct QxGrid {
  GridSpec grid;
  std::vector<double> values;
  double max() const;
};
std::vector<double> qx_values(const CounterexamplePair& pair, const Vec& x, const std::vector<Vec>& omegas);
QxGrid qx_grid(const CounterexamplePair& pair, const Vec& x, const GridSpec& omega_grid);

struct PeriodizationBounds {
  double lower = 0.0;
  double upper = 0.0;
  double tail_bound = 0.0;
  bool lower_flagged = false;  // lower < 1e-8
};
inline constexpr double kPeriodizationFlag = 1e-8;

// Bound on the part of the periodization sum outside radius r.
double periodization_tail(const AtomSum& phi_hat, const Lattice& lat, double r);
PeriodizationBounds periodization_bounds(const AtomSum& phi, const Lattice& lat, int m, double r);

cplx bargmann(const AtomSum& f, cplx z);
double bargmann_residual(const AtomSum& f, const std::vector<Vec>& points);

struct SampledWindow {
  GridSpec grid;
  std::vector<cplx> values;

  static SampledWindow from_atoms(const AtomSum& f, const GridSpec& grid);
  static SampledWindow from_function(const std::function<cplx(const Vec&)>& fn, const GridSpec& grid);
};

std::vector<Vec> canonical_frequencies(const GridSpec& grid);
// FFT when omegas is exactly canonical_frequencies(grid), direct sums otherwise.
std::vector<cplx> stft_numeric(const SampledWindow& f, const SampledWindow& g, const Vec& x,
                               const std::vector<Vec>& omegas);

double max_modulus_mismatch(const AtomSum& f1, const AtomSum& f2, const GridSpec& grid);
bool modulus_equal_on_grid(const AtomSum& f1, const AtomSum& f2, const GridSpec& grid, double tol);
double max_imag_ratio(const AtomSum& f, const GridSpec& grid);
bool is_real_on_grid(const AtomSum& f, const GridSpec& grid, double tol);

}  // namespace phasepairs
