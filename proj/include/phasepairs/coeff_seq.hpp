#pragma once

#include <map>

#include "phasepairs/atoms.hpp"
#include "phasepairs/lattice.hpp"
#include "phasepairs/metaplectic.hpp"

namespace phasepairs {

// Finitely supported coefficients on lattice points; entry k sits at gen * k.
class CoeffSeq {
 public:
  using Entries = std::map<LatticeIndex, cplx>;

  CoeffSeq(Lattice lattice, const Entries& entries);

  const Lattice& lattice() const { return lattice_; }
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double max_abs() const;

  CoeffSeq scaled(cplx factor) const;
  CoeffSeq operator+(const CoeffSeq& other) const;

 private:
  Lattice lattice_;
  Entries entries_;
};

CoeffSeq conjugate_seq(const CoeffSeq& s);
bool is_on_line(const CoeffSeq& s, double tol = 1e-10);
bool is_hermitian(const CoeffSeq& s, double tol = 1e-10);
AtomSum synthesize(const CoeffSeq& s, const SympWord& word, const AtomSum& phi);

}  // namespace phasepairs
