#pragma once

#include <string>
#include <vector>

#include "phasepairs/types.hpp"

namespace phasepairs {

inline constexpr double kMembershipTol = 1e-9;

// Full-rank lattice gen * Z^n. Columns of the generator are the basis vectors.
class Lattice {
 public:
  explicit Lattice(Mat generator);

  static Lattice scaled_integer(int dim, double scale);

  int dim() const { return static_cast<int>(gen_.rows()); }
  const Mat& generator() const { return gen_; }
  const Mat& inverse() const { return inv_; }

  Vec point(const LatticeIndex& k) const;
  // Integer coordinates of x, rounded. Meaningful only when contains(x).
  LatticeIndex index_of(const Vec& x) const;

 private:
  Mat gen_;
  Mat inv_;
};

Lattice reciprocal(const Lattice& lat);
double density(const Lattice& lat);
bool contains(const Lattice& lat, const Vec& x, double tol = kMembershipTol);
// Same point set, decided by containment of each basis in the other lattice.
bool same_lattice(const Lattice& a, const Lattice& b, double tol = 1e-10);

std::vector<LatticeIndex> enumerate_indices(const Lattice& lat, double radius);
std::vector<Vec> enumerate(const Lattice& lat, double radius);

Mat standard_symplectic(int d);
bool is_symplectic(const Mat& s, double tol = 1e-10);
// A^T C and B^T D symmetric, A^T D - C^T B = I.
bool satisfies_block_criterion(const Mat& s, double tol = 1e-10);

struct ScaledSymplectic {
  double alpha;
  Mat s;
};
ScaledSymplectic sl2_normalize(const Mat& l);

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
using RationalMatrix = std::vector<std::vector<Rational>>;

Mat to_matrix(const RationalMatrix& rows);
Lattice rational_envelope(const RationalMatrix& rows);

std::vector<Vec> fundamental_domain_grid(const Lattice& lat, int m);

struct LatticeClass {
  enum class Kind { Rectangular, Separable, Symplectic, General };
  Kind kind = Kind::General;
  double alpha = 0.0;  // Symplectic only
  Mat symplectic;      // Symplectic only
  std::string name() const;
};
LatticeClass classify(const Lattice& lat);

}  // namespace phasepairs
