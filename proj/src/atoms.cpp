#include "phasepairs/atoms.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasepairs/errors.hpp"

namespace phasepairs {

namespace {

constexpr cplx kI{0.0, 1.0};

CMat symmetrized(const CMat& m) { return 0.5 * (m + m.transpose()); }

void require_dim(const AtomSum& f, Eigen::Index n, const char* what) {
  if (n != f.dim()) throw DimensionError(std::string(what) + " has wrong dimension");
}

template <typename Fn>
AtomSum map_atoms(const AtomSum& f, Fn&& fn) {
  std::vector<GaussAtom> out;
  out.reserve(f.size());
  for (const auto& atom : f.atoms()) out.push_back(fn(atom));
  return AtomSum(f.dim(), std::move(out));
}

double condition_number(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace

cplx GaussAtom::value(const Vec& t) const {
  const CVec r = (t - center).cast<cplx>();
  const cplx quad = (r.transpose() * width * r)(0, 0);
  return amp * std::exp(-kPi * quad + 2.0 * kPi * kI * freq.dot(t));
}

void validate(const GaussAtom& atom) {
  const auto d = atom.center.size();
  if (d == 0) throw DimensionError("atom dimension must be positive");
  if (atom.freq.size() != d || atom.width.rows() != d || atom.width.cols() != d)
    throw DimensionError("atom fields disagree on dimension");
  if (!atom.center.allFinite() || !atom.freq.allFinite() || !atom.width.allFinite() ||
      !std::isfinite(atom.amp.real()) || !std::isfinite(atom.amp.imag()))
    throw DomainError("atom has non-finite fields");
  const double scale = std::max(1.0, atom.width.cwiseAbs().maxCoeff());
  if ((atom.width - atom.width.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("atom width matrix is not symmetric");
  const Mat re = atom.width.real();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (re + re.transpose()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 1e-12)
    throw DomainError("atom width matrix must have positive definite real part");
}

GaussAtom make_atom(cplx amp, Vec center, Vec freq, CMat width) {
  GaussAtom atom{amp, std::move(center), std::move(freq), std::move(width)};
  validate(atom);
  return atom;
}

AtomSum::AtomSum(int dim) : dim_(dim) {
  if (dim <= 0) throw DimensionError("atom sum dimension must be positive");
}

AtomSum::AtomSum(int dim, std::vector<GaussAtom> atoms) : dim_(dim), atoms_(std::move(atoms)) {
  if (dim <= 0) throw DimensionError("atom sum dimension must be positive");
  for (const auto& a : atoms_) {
    if (a.dim() != dim_) throw DimensionError("atom dimension differs from sum dimension");
    validate(a);
  }
}

AtomSum AtomSum::single(GaussAtom atom) {
  const int d = atom.dim();
  return AtomSum(d, {std::move(atom)});
}

AtomSum& AtomSum::operator+=(const AtomSum& other) {
  if (other.dim_ != dim_) throw DimensionError("cannot add atom sums of different dimension");
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return *this;
}

cplx AtomSum::operator()(const Vec& t) const { return eval(*this, t); }

AtomSum operator+(AtomSum lhs, const AtomSum& rhs) {
  lhs += rhs;
  return lhs;
}

AtomSum operator*(cplx scale, AtomSum f) {
  if (scale == cplx{0.0, 0.0}) return AtomSum(f.dim());
  return map_atoms(f, [&](GaussAtom a) {
    a.amp *= scale;
    return a;
  });
}

AtomSum standard_gaussian(int d) { return isotropic_gaussian(d, kPi); }

AtomSum isotropic_gaussian(int d, double k) {
  if (k <= 0) throw DomainError("gaussian exponent must be positive");
  return AtomSum::single(make_atom(1.0, Vec::Zero(d), Vec::Zero(d),
                                   CMat::Identity(d, d) * cplx(k / kPi, 0.0)));
}

cplx eval(const AtomSum& f, const Vec& t) {
  require_dim(f, t.size(), "evaluation point");
  cplx sum = 0.0;
  for (const auto& a : f.atoms()) sum += a.value(t);
  return sum;
}

AtomSum translate(const AtomSum& f, const Vec& tau) {
  require_dim(f, tau.size(), "translation");
  return map_atoms(f, [&](GaussAtom a) {
    a.amp *= std::exp(-2.0 * kPi * kI * a.freq.dot(tau));
    a.center += tau;
    return a;
  });
}

AtomSum modulate(const AtomSum& f, const Vec& nu) {
  require_dim(f, nu.size(), "modulation");
  return map_atoms(f, [&](GaussAtom a) {
    a.freq += nu;
    return a;
  });
}

AtomSum reflect(const AtomSum& f) {
  return map_atoms(f, [](GaussAtom a) {
    a.center = -a.center;
    a.freq = -a.freq;
    return a;
  });
}

AtomSum conjugate(const AtomSum& f) {
  return map_atoms(f, [](GaussAtom a) {
    a.amp = std::conj(a.amp);
    a.freq = -a.freq;
    a.width = a.width.conjugate();
    return a;
  });
}

AtomSum fourier(const AtomSum& f) {
  return map_atoms(f, [](const GaussAtom& a) {
    if (condition_number(a.width) > 1e12)
      throw DomainError("fourier: width matrix is numerically singular");
    GaussAtom out;
    out.width = symmetrized(a.width.inverse());
    out.center = a.freq;
    out.freq = -a.center;
    out.amp = a.amp * std::exp(2.0 * kPi * kI * a.center.dot(a.freq)) / sqrt_det(a.width);
    return out;
  });
}

AtomSum inverse_fourier(const AtomSum& f) { return reflect(fourier(f)); }

AtomSum dilate(const AtomSum& f, const Mat& a) {
  require_dim(f, a.rows(), "dilation matrix");
  if (a.rows() != a.cols()) throw DimensionError("dilation matrix must be square");
  const double det = a.determinant();
  if (std::abs(det) <= 1e-12) throw DomainError("dilation matrix is singular");
  const Mat inv = a.inverse();
  const CMat inv_c = inv.cast<cplx>();
  const double scale = 1.0 / std::sqrt(std::abs(det));
  return map_atoms(f, [&](GaussAtom atom) {
    atom.width = symmetrized(inv_c.transpose() * atom.width * inv_c);
    atom.center = a * atom.center;
    atom.freq = inv.transpose() * atom.freq;
    atom.amp *= scale;
    return atom;
  });
}

AtomSum chirp(const AtomSum& f, const Mat& c) {
  require_dim(f, c.rows(), "chirp matrix");
  if (c.rows() != c.cols()) throw DimensionError("chirp matrix must be square");
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("chirp matrix must be symmetric");
  return map_atoms(f, [&](GaussAtom atom) {
    const double aca = atom.center.dot(c * atom.center);
    atom.amp *= std::exp(-kPi * kI * aca);
    atom.freq += c * atom.center;
    atom.width = symmetrized(atom.width - kI * c.cast<cplx>());
    return atom;
  });
}

cplx sqrt_det(const CMat& q) {
  // Eigenvalues of a complex symmetric matrix with Re Q > 0 lie in the open right
  // half-plane along the whole segment from Re Q, so the product of principal roots
  // is the continuous branch.
  if (q.rows() == 1) return std::sqrt(q(0, 0));
  if (q.rows() == 2) {
    const cplx half_tr = 0.5 * (q(0, 0) + q(1, 1));
    const cplx disc = std::sqrt(half_tr * half_tr - (q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0)));
    return std::sqrt(half_tr + disc) * std::sqrt(half_tr - disc);
  }
  Eigen::ComplexEigenSolver<CMat> eig(q, false);
  cplx r = 1.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) r *= std::sqrt(eig.eigenvalues()(i));
  return r;
}

cplx gaussian_integral(const CMat& q, const CVec& w) {
  const CVec sol = q.partialPivLu().solve(w);
  return std::exp(kPi * (w.transpose() * sol)(0, 0)) / sqrt_det(q);
}

static cplx atom_inner(const GaussAtom& f, const GaussAtom& g) {
  const CMat mg = g.width.conjugate();
  const CMat q = f.width + mg;
  const CVec af = f.center.cast<cplx>(), ag = g.center.cast<cplx>();
  const CVec w = f.width * af + mg * ag + kI * (f.freq - g.freq).cast<cplx>();
  const cplx offset = -kPi * ((af.transpose() * f.width * af)(0, 0) + (ag.transpose() * mg * ag)(0, 0));
  const CVec sol = q.partialPivLu().solve(w);
  const cplx exponent = kPi * (w.transpose() * sol)(0, 0) + offset;
  return f.amp * std::conj(g.amp) * std::exp(exponent) / sqrt_det(q);
}

cplx inner_product(const AtomSum& f, const AtomSum& g) {
  if (f.dim() != g.dim()) throw DimensionError("inner product of different dimensions");
  cplx sum = 0.0;
  for (const auto& a : f.atoms())
    for (const auto& b : g.atoms()) sum += atom_inner(a, b);
  return sum;
}

double norm(const AtomSum& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

cplx stft(const AtomSum& f, const AtomSum& g, const Vec& x, const Vec& omega) {
  return inner_product(f, modulate(translate(g, x), omega));
}

}  // namespace phasepairs
