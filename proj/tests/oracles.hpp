#pragma once

// Independent reference computations for the tests: a fixed-seed random battery and
// trapezoid quadrature on [-8, 8]^d that never touches the closed-form formulas.

#include <cmath>
#include <random>
#include <vector>

#include "phasepairs/atoms.hpp"
#include "phasepairs/metaplectic.hpp"

namespace oracle {

using phasepairs::AtomSum;
using phasepairs::cplx;
using phasepairs::CMat;
using phasepairs::GaussAtom;
using phasepairs::Mat;
using phasepairs::Vec;

inline constexpr double kBox = 8.0;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Vec vec(int d, double lo, double hi) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Mat mat(int r, int c, double lo, double hi) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
  cplx complex() { return {uniform(-1, 1), uniform(-1, 1)}; }

 private:
  std::mt19937_64 gen_;
};

inline Mat random_symmetric(Rng& rng, int d, double scale) {
  const Mat m = rng.mat(d, d, -scale, scale);
  return 0.5 * (m + m.transpose());
}

// Well-conditioned, away from singular.
inline Mat random_invertible(Rng& rng, int d) {
  return Mat::Identity(d, d) + rng.mat(d, d, -0.4, 0.4);
}

// Widths kept in a band where the atoms decay far inside the quadrature box and stay resolved.
inline GaussAtom random_atom(Rng& rng, int d) {
  const Mat r = rng.mat(d, d, -0.6, 0.6);
  const Mat re = r * r.transpose() + 0.4 * Mat::Identity(d, d);
  const Mat im = random_symmetric(rng, d, 0.5);
  CMat width = re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
  return phasepairs::make_atom(rng.complex(), rng.vec(d, -1, 1), rng.vec(d, -1, 1), std::move(width));
}

inline AtomSum random_sum(Rng& rng, int d, int max_terms = 3) {
  std::vector<GaussAtom> atoms;
  const int n = rng.integer(1, max_terms);
  for (int i = 0; i < n; ++i) atoms.push_back(random_atom(rng, d));
  return AtomSum(d, std::move(atoms));
}

inline phasepairs::SympWord random_word(Rng& rng, int d, int max_len) {
  std::vector<phasepairs::Generator> gens;
  const int n = rng.integer(0, max_len);
  for (int i = 0; i < n; ++i) {
    switch (rng.integer(0, 2)) {
      case 0: gens.push_back(phasepairs::Dilate{random_invertible(rng, d)}); break;
      case 1: gens.push_back(phasepairs::FourierJ{rng.integer(0, 1) ? 1 : -1}); break;
      default: gens.push_back(phasepairs::Chirp{random_symmetric(rng, d, 0.6)}); break;
    }
  }
  return phasepairs::SympWord(d, std::move(gens));
}

inline int default_nodes(int d) { return d == 1 ? 2048 : 512; }

// Trapezoid rule on [-8, 8]^d; the integrand vanishes at the boundary so it is spectrally accurate.
template <typename Fn>
cplx integrate(int d, Fn&& fn, int nodes = 0) {
  if (nodes == 0) nodes = default_nodes(d);
  const double h = 2 * kBox / nodes;
  cplx sum = 0;
  Vec t(d);
  if (d == 1) {
    for (int i = 0; i <= nodes; ++i) {
      t(0) = -kBox + i * h;
      sum += fn(t);
    }
    return sum * h;
  }
  for (int i = 0; i <= nodes; ++i) {
    t(0) = -kBox + i * h;
    for (int j = 0; j <= nodes; ++j) {
      t(1) = -kBox + j * h;
      sum += fn(t);
    }
  }
  return sum * h * h;
}

inline cplx inner(const AtomSum& f, const AtomSum& g) {
  return integrate(f.dim(), [&](const Vec& t) { return f(t) * std::conj(g(t)); });
}

inline cplx stft(const AtomSum& f, const AtomSum& g, const Vec& x, const Vec& omega) {
  return integrate(f.dim(), [&](const Vec& t) {
    return f(t) * std::conj(g(t - x)) * std::exp(cplx(0, -2 * M_PI * omega.dot(t)));
  });
}

inline cplx fourier_at(const AtomSum& f, const Vec& omega) {
  return integrate(f.dim(), [&](const Vec& t) { return f(t) * std::exp(cplx(0, -2 * M_PI * omega.dot(t))); });
}

}  // namespace oracle
