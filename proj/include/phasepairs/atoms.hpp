#pragma once

#include <vector>

#include "phasepairs/types.hpp"

namespace phasepairs {

// c * exp(-pi (t-a)^T M (t-a)) * exp(2 pi i b.t), M complex symmetric with Re M > 0.
struct GaussAtom {
  cplx amp{1.0, 0.0};
  Vec center;
  Vec freq;
  CMat width;

  int dim() const { return static_cast<int>(center.size()); }
  cplx value(const Vec& t) const;
};

// Throws DomainError/DimensionError if the atom breaks its invariants.
void validate(const GaussAtom& atom);
GaussAtom make_atom(cplx amp, Vec center, Vec freq, CMat width);

class AtomSum {
 public:
  explicit AtomSum(int dim);
  AtomSum(int dim, std::vector<GaussAtom> atoms);
  static AtomSum single(GaussAtom atom);

  int dim() const { return dim_; }
  const std::vector<GaussAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_zero() const { return atoms_.empty(); }

  AtomSum& operator+=(const AtomSum& other);
  cplx operator()(const Vec& t) const;

 private:
  int dim_;
  std::vector<GaussAtom> atoms_;
};

AtomSum operator+(AtomSum lhs, const AtomSum& rhs);
AtomSum operator*(cplx scale, AtomSum f);

// exp(-pi |t|^2)
AtomSum standard_gaussian(int d);
// exp(-k |t|^2)
AtomSum isotropic_gaussian(int d, double k);

cplx eval(const AtomSum& f, const Vec& t);

AtomSum translate(const AtomSum& f, const Vec& tau);
AtomSum modulate(const AtomSum& f, const Vec& nu);
AtomSum reflect(const AtomSum& f);
AtomSum conjugate(const AtomSum& f);
AtomSum fourier(const AtomSum& f);
AtomSum inverse_fourier(const AtomSum& f);
// |det A|^{-1/2} f(A^{-1} x)
AtomSum dilate(const AtomSum& f, const Mat& a);
// exp(pi i x^T C x) f(x)
AtomSum chirp(const AtomSum& f, const Mat& c);

cplx inner_product(const AtomSum& f, const AtomSum& g);
double norm(const AtomSum& f);
// <f, M_omega T_x g>
cplx stft(const AtomSum& f, const AtomSum& g, const Vec& x, const Vec& omega);

// det(Q)^{1/2} on the branch continuous from Re Q, for Re Q positive definite.
cplx sqrt_det(const CMat& q);
// Integral over R^d of exp(-pi t^T Q t + 2 pi w.t).
cplx gaussian_integral(const CMat& q, const CVec& w);

}  // namespace phasepairs
