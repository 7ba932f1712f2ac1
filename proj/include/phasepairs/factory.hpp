#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phasepairs/atoms.hpp"
#include "phasepairs/coeff_seq.hpp"
#include "phasepairs/lattice.hpp"
#include "phasepairs/metaplectic.hpp"

namespace phasepairs {

struct Scenario;

// Equality on matrix(word) (R^d x sampling). Shifts live on the reciprocal of sampling.
struct SemiDiscrete {
  SympWord word;
  Lattice sampling;
};
// Equality on matrix(word) (time Z^d x freq Z^d).
struct FactoredLattice {
  SympWord word;
  Mat time_gen;
  Mat freq_gen;
};
// d = 1, any planar lattice gen Z^2.
struct AnyLattice2D {
  Mat gen;
};
// Separable lattice; the pair also has equal moduli pointwise. Needs a real window.
struct PauliSeparable {
  Mat time_gen;
  Mat freq_gen;
};
// Real-valued pair, equality on lattice x R^d. Needs a real window.
struct RealSign {
  Lattice lattice;
};
struct RationalLattice {
  RationalMatrix gen;
};
// Base pair moved by p = (p_time, p_freq) in phase space.
struct Shifted {
  std::shared_ptr<const Scenario> base;
  Vec p;
};

struct Scenario {
  std::variant<SemiDiscrete, FactoredLattice, AnyLattice2D, PauliSeparable, RealSign, RationalLattice,
               Shifted>
      kind;

  std::string name() const;
  int dim() const;
};

// Guaranteed equality set. The container is transform (R^d x discrete_gen Z^d) + shift.
// When lattice_gen is present the guaranteed set is the full lattice
// lattice_gen Z^{2d} + shift, which sits inside the container.
struct EqualitySet {
  Mat transform;
  Mat discrete_gen;
  Vec shift;
  std::optional<Mat> lattice_gen;

  int dim() const { return static_cast<int>(discrete_gen.rows()); }
  bool in_container(const Vec& z, double tol = 1e-9) const;
  bool contains(const Vec& z, double tol = 1e-9) const;
};

struct Certificate {
  bool seq_in_l2o = false;
  bool seq_hermitian = false;
  double phase_distance = 0.0;
  double norm_sq_sum = 0.0;  // |f1|^2 + |f2|^2
};

struct CounterexamplePair {
  std::string scenario;
  AtomSum f1;
  AtomSum f2;
  AtomSum window;
  // f1 = M_{freq_shift} T_{time_shift} synthesize(sequence, word, generator)
  AtomSum generator;
  SympWord word;
  CoeffSeq sequence;
  Vec time_shift;
  Vec freq_shift;
  EqualitySet equality_set;
  Certificate certificate;
  bool expects_equal_modulus = false;
  bool expects_real = false;
};

Lattice shift_lattice(const Scenario& sc);
CoeffSeq default_sequence(const Scenario& sc);
// The three-point default plus gen*(1,1,0,..) -> 1/2 + i/2.
CoeffSeq four_point_sequence(const Lattice& shifts);

CounterexamplePair build(const Scenario& sc, const AtomSum& window,
                         const std::optional<CoeffSeq>& seq = std::nullopt);

// Same provenance, partner re-synthesized from the given sequence.
AtomSum resynthesize(const CounterexamplePair& pair, const CoeffSeq& seq);
// Partner built from conj(s) with its first entry scaled by (1 + eps); no longer a valid pair.
CounterexamplePair perturbed(const CounterexamplePair& pair, double eps);

std::vector<Vec> equality_points(const CounterexamplePair& pair, int count, double radius);
// Points of the same semi-discrete shape with the discrete coordinate moved off the lattice
// by irrational fractions of its generators.
std::vector<Vec> off_set_probes(const CounterexamplePair& pair, int count, double radius);

// Van der Corput radical inverse, used for the free-coordinate sweep.
double radical_inverse(std::uint64_t i, unsigned base);

}  // namespace phasepairs
