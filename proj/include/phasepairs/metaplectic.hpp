#pragma once

#include <variant>
#include <vector>

#include "phasepairs/atoms.hpp"
#include "phasepairs/types.hpp"

namespace phasepairs {

// matrix diag(A, A^{-T})
struct Dilate {
  Mat a;
};
// sign -1: the Fourier transform, matrix -J. sign +1: its inverse, matrix J.
struct FourierJ {
  int sign = -1;
};
// multiplication by exp(pi i x^T C x), matrix [[I, 0], [C, I]]
struct Chirp {
  Mat c;
};

using Generator = std::variant<Dilate, FourierJ, Chirp>;

// A symplectic matrix written as a product of generators. The matrix is the
// ordered product G1 * G2 * ... * Gn, so the last factor acts first on functions.
class SympWord {
 public:
  explicit SympWord(int dim, std::vector<Generator> factors = {});

  int dim() const { return dim_; }
  const std::vector<Generator>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

 private:
  int dim_;
  std::vector<Generator> factors_;
};

Mat generator_matrix(const Generator& g, int dim);
Mat matrix(const SympWord& word);
AtomSum apply(const SympWord& word, const AtomSum& f);
SympWord inverse_word(const SympWord& word);
SympWord concat(const SympWord& first, const SympWord& second);
// mu(S) T_lambda mu(S)^{-1} f
AtomSum s_shift(const SympWord& word, const Vec& lambda, const AtomSum& f);
SympWord word_for_sl2(const Mat& s);
double interaction_residual(const SympWord& word, const AtomSum& f, const AtomSum& g, const Vec& z);

}  // namespace phasepairs
