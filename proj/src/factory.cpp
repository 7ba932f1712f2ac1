#include "phasepairs/factory.hpp"

#include <algorithm>
#include <cmath>

#include "phasepairs/errors.hpp"
#include "phasepairs/verify.hpp"

namespace phasepairs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

Mat block_diag(const Mat& a, const Mat& b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

LatticeIndex negated(LatticeIndex k) {
  for (auto& v : k) v = -v;
  return k;
}

LatticeIndex unit_index(int d, int axis) {
  LatticeIndex k(d, 0);
  k[axis] = 1;
  return k;
}

// Indices within radius ordered by norm, ties in lexicographic order.
std::vector<LatticeIndex> by_norm(const Lattice& lat, double radius) {
  auto idx = enumerate_indices(lat, radius);
  std::vector<std::pair<long long, LatticeIndex>> keyed;
  keyed.reserve(idx.size());
  for (auto& k : idx) keyed.emplace_back(std::llround(lat.point(k).norm() * 1e9), std::move(k));
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<LatticeIndex> out;
  for (auto& [key, k] : keyed) out.push_back(std::move(k));
  return out;
}

LatticeIndex smallest_nonzero(const Lattice& lat) {
  double r = lat.generator().colwise().norm().minCoeff();
  for (const auto& k : by_norm(lat, r))
    if (std::any_of(k.begin(), k.end(), [](std::int64_t v) { return v != 0; })) return k;
  throw DomainError("lattice has no nonzero vector within its shortest basis length");
}

void require(bool ok, const std::string& hypothesis, const std::string& detail) {
  if (!ok) throw HypothesisError(hypothesis, detail);
}

void require_real_window(const AtomSum& g) {
  require(is_real_on_grid(g, probe_grid(g), 1e-12), "real-valued window",
          "the window must be real-valued for this construction");
}

// Re-express a user sequence on the scenario's shift lattice basis.
CoeffSeq rebased(const CoeffSeq& s, const Lattice& shifts) {
  require(s.lattice().dim() == shifts.dim(), "dimension consistency",
          "sequence lattice dimension differs from the window dimension");
  CoeffSeq::Entries out;
  for (const auto& [k, c] : s.entries()) {
    const Vec pt = s.lattice().point(k);
    require(contains(shifts, pt), "shifts on the reciprocal lattice",
            "sequence support is not contained in the shift lattice");
    out[shifts.index_of(pt)] += c;
  }
  return CoeffSeq(shifts, out);
}

struct Synthesis {
  SympWord word;
  CoeffSeq seq;
  AtomSum generator;
  AtomSum f1;
  AtomSum f2;
};

Synthesis synthesize_pair(const SympWord& word, const CoeffSeq& seq, const AtomSum& window) {
  require(!seq.entries().empty(), "sequence in l2_O", "defining sequence is empty");
  require(!is_on_line(seq), "sequence in l2_O",
          "defining sequence values lie on a line through the origin, so the pair would be "
          "phase-equivalent");
  AtomSum phi = reflect(window);
  AtomSum f1 = synthesize(seq, word, phi);
  AtomSum f2 = synthesize(conjugate_seq(seq), word, phi);
  return {word, seq, std::move(phi), std::move(f1), std::move(f2)};
}

CounterexamplePair assemble(std::string name, Synthesis syn, const AtomSum& window, EqualitySet set) {
  const int d = window.dim();
  Certificate cert;
  cert.seq_in_l2o = !is_on_line(syn.seq);
  cert.seq_hermitian = is_hermitian(syn.seq);
  cert.phase_distance = phase_distance(syn.f1, syn.f2);
  cert.norm_sq_sum = std::pow(norm(syn.f1), 2) + std::pow(norm(syn.f2), 2);
  return CounterexamplePair{std::move(name), std::move(syn.f1), std::move(syn.f2), window,
                            std::move(syn.generator), std::move(syn.word), std::move(syn.seq),
                            Vec::Zero(d), Vec::Zero(d), std::move(set), cert};
}

CoeffSeq chosen(const Scenario& sc, const std::optional<CoeffSeq>& seq) {
  const Lattice shifts = shift_lattice(sc);
  return seq ? rebased(*seq, shifts) : default_sequence(sc);
}

CounterexamplePair build_semi_discrete(const Scenario& sc, const SemiDiscrete& s, const AtomSum& g,
                                       const std::optional<CoeffSeq>& seq) {
  EqualitySet set{matrix(s.word), s.sampling.generator(), Vec::Zero(2 * g.dim()), std::nullopt};
  return assemble(sc.name(), synthesize_pair(s.word, chosen(sc, seq), g), g, std::move(set));
}

CounterexamplePair build_factored(const Scenario& sc, const FactoredLattice& s, const AtomSum& g,
                                  const std::optional<CoeffSeq>& seq) {
  const Mat t = matrix(s.word);
  EqualitySet set{t, s.freq_gen, Vec::Zero(2 * g.dim()), Mat(t * block_diag(s.time_gen, s.freq_gen))};
  return assemble(sc.name(), synthesize_pair(s.word, chosen(sc, seq), g), g, std::move(set));
}

CounterexamplePair build_any_2d(const Scenario& sc, const AnyLattice2D& s, const AtomSum& g,
                                const std::optional<CoeffSeq>& seq) {
  const auto [alpha, sym] = sl2_normalize(s.gen);
  SympWord word = word_for_sl2(sym);
  EqualitySet set{sym, Mat::Constant(1, 1, alpha), Vec::Zero(2), s.gen};
  return assemble(sc.name(), synthesize_pair(word, chosen(sc, seq), g), g, std::move(set));
}

CounterexamplePair build_pauli(const Scenario& sc, const PauliSeparable& s, const AtomSum& g,
                               const std::optional<CoeffSeq>& seq) {
  require_real_window(g);
  const int d = g.dim();
  EqualitySet set{Mat::Identity(2 * d, 2 * d), s.freq_gen, Vec::Zero(2 * d),
                  block_diag(s.time_gen, s.freq_gen)};
  auto pair = assemble(sc.name(), synthesize_pair(SympWord(d), chosen(sc, seq), g), g, std::move(set));
  pair.expects_equal_modulus = true;
  return pair;
}

CounterexamplePair build_real_sign(const Scenario& sc, const RealSign& s, const AtomSum& g,
                                   const std::optional<CoeffSeq>& seq) {
  require_real_window(g);
  const int d = g.dim();
  CoeffSeq coeffs = chosen(sc, seq);
  require(is_hermitian(coeffs), "Hermitian sequence",
          "sign retrieval needs c(-k) = conj(c(k)) for every stored k");
  SympWord word(d, {FourierJ{-1}});
  EqualitySet set{matrix(word), s.lattice.generator(), Vec::Zero(2 * d), std::nullopt};
  auto pair = assemble(sc.name(), synthesize_pair(word, coeffs, g), g, std::move(set));
  pair.expects_real = true;
  return pair;
}

Scenario rational_delegate(const RationalLattice& s, bool real_window) {
  const Lattice env = rational_envelope(s.gen);
  const int d = env.dim() / 2;
  const Mat time = env.generator().topLeftCorner(d, d);
  const Mat freq = env.generator().bottomRightCorner(d, d);
  if (real_window) return Scenario{RealSign{Lattice(time)}};
  // -J (freq Z^d x time Z^d) = time Z^d x freq Z^d, same shift lattice as the real branch
  return Scenario{FactoredLattice{SympWord(d, {FourierJ{-1}}), freq, time}};
}

}  // namespace

std::string Scenario::name() const {
  return std::visit(overloaded{
                        [](const SemiDiscrete&) -> std::string { return "semi_discrete"; },
                        [](const FactoredLattice&) -> std::string { return "factored_lattice"; },
                        [](const AnyLattice2D&) -> std::string { return "any_lattice_2d"; },
                        [](const PauliSeparable&) -> std::string { return "pauli_separable"; },
                        [](const RealSign&) -> std::string { return "real_sign"; },
                        [](const RationalLattice&) -> std::string { return "rational_lattice"; },
                        [](const Shifted&) -> std::string { return "shifted"; },
                    },
                    kind);
}

int Scenario::dim() const {
  return std::visit(overloaded{
                        [](const SemiDiscrete& s) { return s.word.dim(); },
                        [](const FactoredLattice& s) { return s.word.dim(); },
                        [](const AnyLattice2D&) { return 1; },
                        [](const PauliSeparable& s) { return static_cast<int>(s.time_gen.rows()); },
                        [](const RealSign& s) { return s.lattice.dim(); },
                        [](const RationalLattice& s) { return static_cast<int>(s.gen.size() / 2); },
                        [](const Shifted& s) { return s.base->dim(); },
                    },
                    kind);
}

bool EqualitySet::in_container(const Vec& z, double tol) const {
  const int d = dim();
  if (z.size() != 2 * d) throw DimensionError("phase-space point has wrong dimension");
  const Vec pre = transform.partialPivLu().solve(z - shift);
  return phasepairs::contains(Lattice(discrete_gen), pre.tail(d), tol);
}

bool EqualitySet::contains(const Vec& z, double tol) const {
  if (!lattice_gen) return in_container(z, tol);
  return phasepairs::contains(Lattice(*lattice_gen), z - shift, tol);
}

Lattice shift_lattice(const Scenario& sc) {
  return std::visit(
      overloaded{
          [](const SemiDiscrete& s) { return reciprocal(s.sampling); },
          [](const FactoredLattice& s) { return reciprocal(Lattice(s.freq_gen)); },
          [](const AnyLattice2D& s) { return Lattice::scaled_integer(1, 1.0 / sl2_normalize(s.gen).alpha); },
          [](const PauliSeparable& s) { return reciprocal(Lattice(s.freq_gen)); },
          [](const RealSign& s) { return reciprocal(s.lattice); },
          // the shift lattice is the same for both delegates
          [](const RationalLattice& s) { return shift_lattice(rational_delegate(s, true)); },
          [](const Shifted& s) { return shift_lattice(*s.base); },
      },
      sc.kind);
}

CoeffSeq default_sequence(const Scenario& sc) {
  const Lattice shifts = shift_lattice(sc);
  const int d = shifts.dim();
  if (std::holds_alternative<PauliSeparable>(sc.kind)) {
    const LatticeIndex k = smallest_nonzero(shifts);
    return CoeffSeq(shifts, {{negated(k), 1.0}, {k, cplx(0, 1)}});
  }
  if (std::holds_alternative<RealSign>(sc.kind)) {
    const LatticeIndex k = smallest_nonzero(shifts);
    return CoeffSeq(shifts, {{k, cplx(1, 2)}, {negated(k), cplx(1, -2)}});
  }
  if (const auto* r = std::get_if<RationalLattice>(&sc.kind))
    return default_sequence(rational_delegate(*r, true));
  if (const auto* s = std::get_if<Shifted>(&sc.kind)) return default_sequence(*s->base);
  if (d == 1) return CoeffSeq(shifts, {{{-1}, 1.0}, {{0}, cplx(0, 1)}, {{1}, cplx(1, 1)}});
  return CoeffSeq(shifts, {{LatticeIndex(d, 0), 1.0}, {unit_index(d, 0), cplx(0, 1)},
                           {unit_index(d, 1), cplx(1, 1)}});
}

CoeffSeq four_point_sequence(const Lattice& shifts) {
  const int d = shifts.dim();
  if (d < 2) throw DimensionError("four-point sequence needs d >= 2");
  LatticeIndex both(d, 0);
  both[0] = both[1] = 1;
  return CoeffSeq(shifts, {{LatticeIndex(d, 0), 1.0}, {unit_index(d, 0), cplx(0, 1)},
                           {unit_index(d, 1), cplx(1, 1)}, {both, cplx(0.5, 0.5)}});
}

CounterexamplePair build(const Scenario& sc, const AtomSum& window, const std::optional<CoeffSeq>& seq) {
  require(window.dim() == sc.dim(), "dimension consistency",
          "window dimension " + std::to_string(window.dim()) + " differs from scenario dimension " +
              std::to_string(sc.dim()));
  require(!window.is_zero(), "nonzero window", "the window is the zero function");
  return std::visit(
      overloaded{
          [&](const SemiDiscrete& s) { return build_semi_discrete(sc, s, window, seq); },
          [&](const FactoredLattice& s) { return build_factored(sc, s, window, seq); },
          [&](const AnyLattice2D& s) {
            require(s.gen.rows() == 2 && s.gen.cols() == 2, "dimension consistency",
                    "planar lattice generator must be 2x2");
            return build_any_2d(sc, s, window, seq);
          },
          [&](const PauliSeparable& s) { return build_pauli(sc, s, window, seq); },
          [&](const RealSign& s) { return build_real_sign(sc, s, window, seq); },
          [&](const RationalLattice& s) {
            const bool real = is_real_on_grid(window, probe_grid(window), 1e-12);
            const Scenario delegate = rational_delegate(s, real);
            CounterexamplePair pair = build(delegate, window, seq);
            pair.scenario = sc.name() + "/" + delegate.name();
            pair.equality_set.lattice_gen = to_matrix(s.gen);
            return pair;
          },
          [&](const Shifted& s) {
            const int d = window.dim();
            require(s.p.size() == 2 * d, "dimension consistency", "shift p must have length 2d");
            CounterexamplePair pair = build(*s.base, window, seq);
            const Vec pa = s.p.head(d), pb = s.p.tail(d);
            pair.f1 = modulate(translate(pair.f1, pa), pb);
            pair.f2 = modulate(translate(pair.f2, pa), pb);
            pair.time_shift += pa;
            pair.freq_shift += pb;
            pair.equality_set.shift += s.p;
            pair.scenario = sc.name() + "/" + pair.scenario;
            return pair;
          },
      },
      sc.kind);
}

AtomSum resynthesize(const CounterexamplePair& pair, const CoeffSeq& seq) {
  const AtomSum h = synthesize(seq, pair.word, pair.generator);
  return modulate(translate(h, pair.time_shift), pair.freq_shift);
}

CounterexamplePair perturbed(const CounterexamplePair& pair, double eps) {
  CoeffSeq::Entries entries = conjugate_seq(pair.sequence).entries();
  if (!entries.empty()) entries.begin()->second *= (1.0 + eps);
  CounterexamplePair out = pair;
  out.f2 = resynthesize(pair, CoeffSeq(pair.sequence.lattice(), entries));
  out.certificate.phase_distance = phase_distance(out.f1, out.f2);
  out.certificate.norm_sq_sum = std::pow(norm(out.f1), 2) + std::pow(norm(out.f2), 2);
  return out;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

static std::vector<Vec> semi_discrete_points(const EqualitySet& set, int count, double radius,
                                             const Vec& discrete_offset) {
  const int d = set.dim();
  if (d > static_cast<int>(std::size(kPrimes))) throw DimensionError("dimension too large for the sweep");
  const Lattice disc(set.discrete_gen);
  const auto ks = by_norm(disc, radius);
  std::vector<Vec> out;
  // Van der Corput sweep rotated by a half period so the first point sits at the free origin.
  for (int i = 0; i < count; ++i) {
    Vec z0(2 * d);
    for (int j = 0; j < d; ++j) {
      const double u = radical_inverse(static_cast<std::uint64_t>(i), kPrimes[j]) + 0.5;
      z0(j) = radius * (2.0 * (u - std::floor(u)) - 1.0);
    }
    z0.tail(d) = disc.point(ks[static_cast<std::size_t>(i) % ks.size()]) + discrete_offset;
    out.push_back(set.transform * z0 + set.shift);
  }
  return out;
}

std::vector<Vec> equality_points(const CounterexamplePair& pair, int count, double radius) {
  if (count < 1) throw DomainError("equality_points needs count >= 1");
  const EqualitySet& set = pair.equality_set;
  if (!set.lattice_gen) return semi_discrete_points(set, count, radius, Vec::Zero(set.dim()));
  const Lattice lat(*set.lattice_gen);
  std::vector<Vec> out;
  for (const auto& k : by_norm(lat, radius)) {
    if (static_cast<int>(out.size()) == count) break;
    out.push_back(lat.point(k) + set.shift);
  }
  return out;
}

std::vector<Vec> off_set_probes(const CounterexamplePair& pair, int count, double radius) {
  if (count < 1) throw DomainError("off_set_probes needs count >= 1");
  const EqualitySet& set = pair.equality_set;
  // Irrational fractions of the discrete generators avoid any finer lattice the pair may also vanish on.
  Vec frac(set.dim());
  for (int j = 0; j < set.dim(); ++j) {
    const double r = std::sqrt(static_cast<double>(kPrimes[j % std::size(kPrimes)]));
    frac(j) = r - std::floor(r);
  }
  return semi_discrete_points(set, count, radius, set.discrete_gen * frac);
}

}  // namespace phasepairs
