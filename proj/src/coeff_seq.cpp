#include "phasepairs/coeff_seq.hpp"

#include <cmath>

#include "phasepairs/errors.hpp"

namespace phasepairs {

CoeffSeq::CoeffSeq(Lattice lattice, const Entries& entries) : lattice_(std::move(lattice)) {
  for (const auto& [k, c] : entries) {
    if (static_cast<int>(k.size()) != lattice_.dim())
      throw DimensionError("sequence index has wrong length");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DomainError("sequence value is not finite");
    if (c != cplx{0.0, 0.0}) entries_.emplace(k, c);
  }
}

double CoeffSeq::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : entries_) m = std::max(m, std::abs(c));
  return m;
}

CoeffSeq CoeffSeq::scaled(cplx factor) const {
  Entries out;
  for (const auto& [k, c] : entries_) out[k] = factor * c;
  return CoeffSeq(lattice_, out);
}

CoeffSeq CoeffSeq::operator+(const CoeffSeq& other) const {
  if (lattice_.dim() != other.lattice_.dim() ||
      (lattice_.generator() - other.lattice_.generator()).cwiseAbs().maxCoeff() > 1e-12)
    throw DimensionError("sequences live on different lattice bases");
  Entries out = entries_;
  for (const auto& [k, c] : other.entries_) out[k] += c;
  return CoeffSeq(lattice_, out);
}

CoeffSeq conjugate_seq(const CoeffSeq& s) {
  CoeffSeq::Entries out;
  for (const auto& [k, c] : s.entries()) out[k] = std::conj(c);
  return CoeffSeq(s.lattice(), out);
}

bool is_on_line(const CoeffSeq& s, double tol) {
  const double m = s.max_abs();
  const double limit = tol * m * m;
  for (auto i = s.entries().begin(); i != s.entries().end(); ++i)
    for (auto j = std::next(i); j != s.entries().end(); ++j)
      if (std::abs((i->second * std::conj(j->second)).imag()) > limit) return false;
  return true;
}

bool is_hermitian(const CoeffSeq& s, double tol) {
  const double limit = tol * s.max_abs();
  for (const auto& [k, c] : s.entries()) {
    LatticeIndex neg(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
    const auto it = s.entries().find(neg);
    if (it == s.entries().end()) return false;
    if (std::abs(it->second - std::conj(c)) > limit) return false;
  }
  return true;
}

AtomSum synthesize(const CoeffSeq& s, const SympWord& word, const AtomSum& phi) {
  if (phi.dim() != word.dim() || s.lattice().dim() != word.dim())
    throw DimensionError("sequence, word and generator function disagree on dimension");
  const AtomSum pulled_back = apply(inverse_word(word), phi);
  AtomSum out(phi.dim());
  for (const auto& [k, c] : s.entries())
    out += c * apply(word, translate(pulled_back, s.lattice().point(k)));
  return out;
}

}  // namespace phasepairs
