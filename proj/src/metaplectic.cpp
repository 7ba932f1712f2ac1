#include "phasepairs/metaplectic.hpp"

#include <cmath>

#include "phasepairs/errors.hpp"
#include "phasepairs/lattice.hpp"

namespace phasepairs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_generator(const Generator& g, int d) {
  std::visit(overloaded{
                 [d](const Dilate& x) {
                   if (x.a.rows() != d || x.a.cols() != d)
                     throw DimensionError("dilate generator has wrong size");
                   if (std::abs(x.a.determinant()) <= 1e-12)
                     throw DomainError("dilate generator is singular");
                 },
                 [](const FourierJ& x) {
                   if (x.sign != 1 && x.sign != -1)
                     throw DomainError("fourier generator sign must be +1 or -1");
                 },
                 [d](const Chirp& x) {
                   if (x.c.rows() != d || x.c.cols() != d)
                     throw DimensionError("chirp generator has wrong size");
                   const double scale = std::max(1.0, x.c.cwiseAbs().maxCoeff());
                   if ((x.c - x.c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                     throw DomainError("chirp generator must be symmetric");
                 },
             },
             g);
}

AtomSum apply_generator(const Generator& g, const AtomSum& f) {
  return std::visit(overloaded{
                        [&](const Dilate& x) { return dilate(f, x.a); },
                        [&](const FourierJ& x) { return x.sign < 0 ? fourier(f) : inverse_fourier(f); },
                        [&](const Chirp& x) { return chirp(f, x.c); },
                    },
                    g);
}

Generator inverted(const Generator& g) {
  return std::visit(overloaded{
                        [](const Dilate& x) -> Generator { return Dilate{x.a.inverse()}; },
                        [](const FourierJ& x) -> Generator { return FourierJ{-x.sign}; },
                        [](const Chirp& x) -> Generator { return Chirp{-x.c}; },
                    },
                    g);
}

}  // namespace

SympWord::SympWord(int dim, std::vector<Generator> factors) : dim_(dim), factors_(std::move(factors)) {
  if (dim <= 0) throw DimensionError("word dimension must be positive");
  for (const auto& g : factors_) check_generator(g, dim_);
  const Mat m = matrix(*this);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!is_symplectic(m, 1e-10 * scale * scale))
    throw DomainError("word does not multiply out to a symplectic matrix");
}

Mat generator_matrix(const Generator& g, int d) {
  const Mat id = Mat::Identity(d, d);
  Mat m = Mat::Zero(2 * d, 2 * d);
  std::visit(overloaded{
                 [&](const Dilate& x) {
                   m.topLeftCorner(d, d) = x.a;
                   m.bottomRightCorner(d, d) = x.a.inverse().transpose();
                 },
                 [&](const FourierJ& x) { m = x.sign * standard_symplectic(d); },
                 [&](const Chirp& x) {
                   m.topLeftCorner(d, d) = id;
                   m.bottomRightCorner(d, d) = id;
                   m.bottomLeftCorner(d, d) = x.c;
                 },
             },
             g);
  return m;
}

Mat matrix(const SympWord& word) {
  const int d = word.dim();
  Mat m = Mat::Identity(2 * d, 2 * d);
  for (const auto& g : word.factors()) m = m * generator_matrix(g, d);
  return m;
}

AtomSum apply(const SympWord& word, const AtomSum& f) {
  if (f.dim() != word.dim()) throw DimensionError("word and function dimensions differ");
  AtomSum out = f;
  for (auto it = word.factors().rbegin(); it != word.factors().rend(); ++it)
    out = apply_generator(*it, out);
  return out;
}

SympWord inverse_word(const SympWord& word) {
  std::vector<Generator> inv;
  for (auto it = word.factors().rbegin(); it != word.factors().rend(); ++it) inv.push_back(inverted(*it));
  return SympWord(word.dim(), std::move(inv));
}

SympWord concat(const SympWord& first, const SympWord& second) {
  if (first.dim() != second.dim()) throw DimensionError("cannot concatenate words of different dimension");
  std::vector<Generator> all = first.factors();
  all.insert(all.end(), second.factors().begin(), second.factors().end());
  return SympWord(first.dim(), std::move(all));
}

AtomSum s_shift(const SympWord& word, const Vec& lambda, const AtomSum& f) {
  return apply(word, translate(apply(inverse_word(word), f), lambda));
}

SympWord word_for_sl2(const Mat& s) {
  if (s.rows() != 2 || s.cols() != 2) throw DimensionError("word_for_sl2 needs a 2x2 matrix");
  if (std::abs(s.determinant() - 1.0) > 1e-10) throw DomainError("word_for_sl2 needs det S = 1");
  const double a = s(0, 0), b = s(0, 1), c = s(1, 0), d = s(1, 1);
  auto scalar = [](double x) { return Mat::Constant(1, 1, x); };
  std::vector<Generator> raw;
  if (std::abs(b) > 1e-8) {
    // [[1,0],[d/b,1]] diag(b,1/b) (-J) [[1,0],[a/b,1]]
    raw = {Chirp{scalar(d / b)}, Dilate{scalar(b)}, FourierJ{-1}, Chirp{scalar(a / b)}};
  } else {
    // lower triangular: [[1,0],[c/a,1]] diag(a,1/a)
    raw = {Chirp{scalar(c / a)}, Dilate{scalar(a)}};
  }
  std::vector<Generator> kept;
  for (auto& g : raw) {
    if (auto* ch = std::get_if<Chirp>(&g); ch && std::abs(ch->c(0, 0)) <= 1e-14) continue;
    if (auto* dl = std::get_if<Dilate>(&g); dl && std::abs(dl->a(0, 0) - 1.0) <= 1e-14) continue;
    kept.push_back(std::move(g));
  }
  return SympWord(1, std::move(kept));
}

double interaction_residual(const SympWord& word, const AtomSum& f, const AtomSum& g, const Vec& z) {
  const int d = word.dim();
  if (z.size() != 2 * d) throw DimensionError("phase-space point has wrong dimension");
  const Vec sz = matrix(word) * z;
  const double lhs = std::abs(stft(f, g, sz.head(d), sz.tail(d)));
  const SympWord inv = inverse_word(word);
  const double rhs = std::abs(stft(apply(inv, f), apply(inv, g), z.head(d), z.tail(d)));
  return std::abs(lhs - rhs);
}

}  // namespace phasepairs
