#include "phasepairs/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "phasepairs/errors.hpp"

namespace phasepairs {

namespace {

bool is_negligible(double x, double scale) { return std::abs(x) <= 1e-12 * scale; }

// Odometer over the integer box [-bound_i, bound_i], lexicographic in the coordinates.
template <typename Fn>
void for_each_in_box(const std::vector<std::int64_t>& bound, Fn&& fn) {
  const std::size_t n = bound.size();
  LatticeIndex k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = -bound[i];
  while (true) {
    fn(k);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (k[i] < bound[i]) {
        ++k[i];
        for (std::size_t j = i + 1; j < n; ++j) k[j] = -bound[j];
        break;
      }
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace

Lattice::Lattice(Mat generator) : gen_(std::move(generator)) {
  if (gen_.rows() == 0 || gen_.rows() != gen_.cols())
    throw DimensionError("lattice generator must be a non-empty square matrix");
  if (!gen_.allFinite()) throw DomainError("lattice generator has non-finite entries");
  if (std::abs(gen_.determinant()) <= 1e-12)
    throw DomainError("lattice generator is singular (|det| <= 1e-12)");
  inv_ = gen_.inverse();
}

Lattice Lattice::scaled_integer(int dim, double scale) {
  return Lattice(scale * Mat::Identity(dim, dim));
}

Vec Lattice::point(const LatticeIndex& k) const {
  if (static_cast<int>(k.size()) != dim()) throw DimensionError("lattice index has wrong length");
  Vec z(dim());
  for (int i = 0; i < dim(); ++i) z(i) = static_cast<double>(k[i]);
  return gen_ * z;
}

LatticeIndex Lattice::index_of(const Vec& x) const {
  if (x.size() != dim()) throw DimensionError("point has wrong dimension");
  const Vec c = inv_ * x;
  LatticeIndex k(dim());
  for (int i = 0; i < dim(); ++i) k[i] = std::llround(c(i));
  return k;
}

Lattice reciprocal(const Lattice& lat) { return Lattice(lat.inverse().transpose()); }

double density(const Lattice& lat) { return 1.0 / std::abs(lat.generator().determinant()); }

bool contains(const Lattice& lat, const Vec& x, double tol) {
  if (x.size() != lat.dim()) throw DimensionError("point has wrong dimension");
  const Vec c = lat.inverse() * x;
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c(i) - std::round(c(i))) > tol) return false;
  return true;
}

bool same_lattice(const Lattice& a, const Lattice& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (int j = 0; j < a.dim(); ++j) {
    if (!contains(b, a.generator().col(j), tol)) return false;
    if (!contains(a, b.generator().col(j), tol)) return false;
  }
  return true;
}

std::vector<LatticeIndex> enumerate_indices(const Lattice& lat, double radius) {
  if (radius < 0) throw DomainError("enumeration radius must be non-negative");
  const int n = lat.dim();
  std::vector<std::int64_t> bound(n);
  for (int i = 0; i < n; ++i)
    bound[i] = static_cast<std::int64_t>(std::floor(lat.inverse().row(i).norm() * radius + 1e-9));
  const double limit = radius * (1.0 + 1e-12) + 1e-12;
  std::vector<LatticeIndex> out;
  for_each_in_box(bound, [&](const LatticeIndex& k) {
    if (lat.point(k).norm() <= limit) out.push_back(k);
  });
  return out;
}

std::vector<Vec> enumerate(const Lattice& lat, double radius) {
  std::vector<Vec> out;
  for (const auto& k : enumerate_indices(lat, radius)) out.push_back(lat.point(k));
  return out;
}

Mat standard_symplectic(int d) {
  Mat j = Mat::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d) = -Mat::Identity(d, d);
  j.bottomLeftCorner(d, d) = Mat::Identity(d, d);
  return j;
}

static int half_dim(const Mat& s) {
  if (s.rows() != s.cols() || s.rows() == 0 || s.rows() % 2 != 0)
    throw DimensionError("symplectic test needs a square matrix of even size");
  return static_cast<int>(s.rows() / 2);
}

bool is_symplectic(const Mat& s, double tol) {
  const int d = half_dim(s);
  const Mat j = standard_symplectic(d);
  return (s.transpose() * j * s - j).cwiseAbs().maxCoeff() <= tol;
}

bool satisfies_block_criterion(const Mat& s, double tol) {
  const int d = half_dim(s);
  const Mat a = s.topLeftCorner(d, d), b = s.topRightCorner(d, d);
  const Mat c = s.bottomLeftCorner(d, d), dd = s.bottomRightCorner(d, d);
  const Mat atc = a.transpose() * c;
  const Mat btd = b.transpose() * dd;
  const Mat cross = a.transpose() * dd - c.transpose() * b - Mat::Identity(d, d);
  return (atc - atc.transpose()).cwiseAbs().maxCoeff() <= tol &&
         (btd - btd.transpose()).cwiseAbs().maxCoeff() <= tol && cross.cwiseAbs().maxCoeff() <= tol;
}

ScaledSymplectic sl2_normalize(const Mat& l) {
  if (l.rows() != 2 || l.cols() != 2) throw DimensionError("sl2_normalize needs a 2x2 matrix");
  Mat oriented = l;
  double det = oriented.determinant();
  if (std::abs(det) <= 1e-12) throw DomainError("sl2_normalize: singular matrix");
  if (det < 0) {
    oriented.col(1) *= -1.0;
    det = -det;
  }
  const double alpha = std::sqrt(det);
  return {alpha, oriented / alpha};
}

Mat to_matrix(const RationalMatrix& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw DimensionError("rational matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (rows[i][j].den == 0) throw DomainError("rational entry with zero denominator");
      m(i, j) = rows[i][j].value();
    }
  }
  return m;
}

Lattice rational_envelope(const RationalMatrix& rows) {
  const Mat l = to_matrix(rows);
  const auto n = l.rows();
  if (n % 2 != 0) throw DimensionError("rational lattice generator must be 2d x 2d");
  Lattice full(l);
  Mat diag = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double prod = 1.0;
    for (const auto& q : rows[i]) prod *= static_cast<double>(std::llabs(q.den));
    diag(i, i) = 1.0 / prod;
  }
  Lattice env(diag);
  std::vector<std::int64_t> bound(n, 3);
  bool ok = true;
  for_each_in_box(bound, [&](const LatticeIndex& k) {
    if (ok && !contains(env, full.point(k))) ok = false;
  });
  if (!ok) throw DomainError("rational envelope does not contain the lattice");
  return env;
}

std::vector<Vec> fundamental_domain_grid(const Lattice& lat, int m) {
  if (m < 1) throw DomainError("fundamental_domain_grid needs m >= 1");
  const int n = lat.dim();
  std::vector<Vec> out;
  LatticeIndex k(n, 0);
  while (true) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u(i) = static_cast<double>(k[i]) / m;
    out.push_back(lat.generator() * u);
    int i = n - 1;
    while (i >= 0 && ++k[i] == m) k[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::string LatticeClass::name() const {
  switch (kind) {
    case Kind::Rectangular: return "rectangular";
    case Kind::Separable: return "separable";
    case Kind::Symplectic: return "symplectic";
    case Kind::General: return "general";
  }
  return "general";
}

LatticeClass classify(const Lattice& lat) {
  const Mat& g = lat.generator();
  const int n = lat.dim();
  const double scale = g.cwiseAbs().maxCoeff();

  // one nonzero per column, columns hitting distinct rows
  std::vector<int> row_of(n, -1);
  std::vector<bool> row_used(n, false);
  bool rectangular = true;
  for (int j = 0; j < n && rectangular; ++j) {
    int hits = 0;
    for (int i = 0; i < n; ++i)
      if (!is_negligible(g(i, j), scale)) {
        ++hits;
        row_of[j] = i;
      }
    if (hits != 1 || row_used[row_of[j]]) rectangular = false;
    else row_used[row_of[j]] = true;
  }
  if (rectangular) return {LatticeClass::Kind::Rectangular, 0.0, {}};
  if (n % 2 != 0) return {};

  const int d = n / 2;
  int top = 0, bottom = 0;
  bool separable = true;
  for (int j = 0; j < n && separable; ++j) {
    const bool in_top = g.col(j).head(d).cwiseAbs().maxCoeff() > 1e-12 * scale;
    const bool in_bottom = g.col(j).tail(d).cwiseAbs().maxCoeff() > 1e-12 * scale;
    if (in_top && in_bottom) separable = false;
    else if (in_top) ++top;
    else ++bottom;
  }
  if (separable && top == d && bottom == d) return {LatticeClass::Kind::Separable, 0.0, {}};

  if (n == 2) {
    auto [alpha, s] = sl2_normalize(g);
    return {LatticeClass::Kind::Symplectic, alpha, s};
  }
  const double det = g.determinant();
  if (det > 0) {
    const double alpha = std::pow(det, 1.0 / n);
    const Mat s = g / alpha;
    if (is_symplectic(s, 1e-10)) return {LatticeClass::Kind::Symplectic, alpha, s};
  }
  return {};
}

}  // namespace phasepairs
