#pragma once

// Families of channels under adversarial state selection: state-mixed
// channels, k-letter products and lifts, channel prefixing, degradedness
// certification (via a small LP), best-eavesdropper and
// product-structure checks, and the Hausdorff distance between channel
// families.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/prob.hpp"
#include "avwc/sequence.hpp"
#include "avwc/simplex_lp.hpp"

namespace avwc {

// ---------------------------------------------------------------------------
// Specs.
// ---------------------------------------------------------------------------

// Per-letter state-varying wiretap pair: state s selects both the channel to
// the legitimate receiver (legit[s]: A -> B) and to the eavesdropper
// (eaves[s]: A -> C).
struct AvwcSpec {
  std::vector<std::string> state_names;
  std::vector<Channel> legit;
  std::vector<Channel> eaves;

  AvwcSpec() = default;
  AvwcSpec(std::vector<std::string> names, std::vector<Channel> w,
           std::vector<Channel> v)
      : state_names(std::move(names)), legit(std::move(w)), eaves(std::move(v)) {
    validate();
  }

  int s_size() const { return static_cast<int>(legit.size()); }
  int a_size() const { return legit.at(0).in_size(); }
  int b_size() const { return legit.at(0).out_size(); }
  int c_size() const { return eaves.at(0).out_size(); }

  void validate() const {
    if (legit.empty() || legit.size() != eaves.size())
      throw std::invalid_argument("AvwcSpec: need equally many legit/eaves states");
    if (!state_names.empty() && state_names.size() != legit.size())
      throw std::invalid_argument("AvwcSpec: state name count mismatch");
    const int a = legit[0].in_size(), b = legit[0].out_size(),
              c = eaves[0].out_size();
    for (std::size_t s = 0; s < legit.size(); ++s) {
      if (legit[s].in_size() != a || legit[s].out_size() != b)
        throw std::invalid_argument("AvwcSpec: legit channel dims differ");
      if (eaves[s].in_size() != a || eaves[s].out_size() != c)
        throw std::invalid_argument("AvwcSpec: eaves channel dims differ");
    }
  }
};

// Compound legit part (state fixed for the whole block, drawn from a finite
// list) with a per-letter arbitrarily varying eavesdropper part.
// compound_labels optionally records the mixture weights each compound
// channel was built from (k_letter_lift fills them in).
struct CavwcSpec {
  std::vector<Channel> compound;  // W_r : A -> B
  std::vector<Channel> eaves;     // V_s : A -> C, per-letter states
  std::vector<Distribution> compound_labels;  // optional, size 0 or |compound|

  CavwcSpec() = default;
  CavwcSpec(std::vector<Channel> comp, std::vector<Channel> ev,
            std::vector<Distribution> labels = {})
      : compound(std::move(comp)), eaves(std::move(ev)),
        compound_labels(std::move(labels)) {
    validate();
  }

  int r_size() const { return static_cast<int>(compound.size()); }
  int s_size() const { return static_cast<int>(eaves.size()); }
  int a_size() const { return compound.at(0).in_size(); }
  int b_size() const { return compound.at(0).out_size(); }
  int c_size() const { return eaves.at(0).out_size(); }

  void validate() const {
    if (compound.empty() || eaves.empty())
      throw std::invalid_argument("CavwcSpec: empty channel family");
    const int a = compound[0].in_size(), b = compound[0].out_size(),
              c = eaves[0].out_size();
    for (const auto& w : compound)
      if (w.in_size() != a || w.out_size() != b)
        throw std::invalid_argument("CavwcSpec: compound channel dims differ");
    for (const auto& v : eaves)
      if (v.in_size() != a || v.out_size() != c)
        throw std::invalid_argument("CavwcSpec: eaves channel dims differ");
    if (!compound_labels.empty() &&
        compound_labels.size() != compound.size())
      throw std::invalid_argument("CavwcSpec: label count mismatch");
  }
};

// Views a per-letter-varying spec as a compound-legit one: each legit state
// becomes a compound candidate held fixed for the whole block, while the
// eavesdropper keeps its per-letter freedom.  This is the reduction used
// when building codes: the decoder covers the legit list, the secrecy audit
// sweeps eavesdropper state sequences.
inline CavwcSpec cavwc_from_avwc(const AvwcSpec& spec) {
  spec.validate();
  return CavwcSpec(spec.legit, spec.eaves);
}

struct DegradednessCertificate {
  bool feasible = false;
  Channel map;      // T with V ~= T o W (the residual-minimizing T)
  double residual = 0.0;  // max_(x,z) |V(z|x) - (T o W)(z|x)|
};

// ---------------------------------------------------------------------------
// Mixtures and products.
// ---------------------------------------------------------------------------

// State-averaged channel W_q = sum_s q(s) W_s.
inline Channel mix_channel(const std::vector<Channel>& family,
                           const Distribution& q) {
  if (family.empty()) throw std::invalid_argument("mix_channel: empty family");
  if (q.size() != static_cast<int>(family.size()))
    throw std::invalid_argument("mix_channel: weight count mismatch");
  const int a = family[0].in_size(), b = family[0].out_size();
  std::vector<double> w(static_cast<std::size_t>(a) * b, 0.0);
  for (int s = 0; s < q.size(); ++s) {
    if (family[static_cast<std::size_t>(s)].in_size() != a ||
        family[static_cast<std::size_t>(s)].out_size() != b)
      throw std::invalid_argument("mix_channel: family dims differ");
    const double qs = q[s];
    if (qs == 0.0) continue;
    const auto& raw = family[static_cast<std::size_t>(s)].raw();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += qs * raw[i];
  }
  return Channel(a, b, std::move(w));
}

// prod_i family[s_i](y_i | x_i): the block transition probability when the
// state varies per letter.
inline double sequence_transition(const std::vector<Channel>& family,
                                  const Word& x_n, const Word& y_n,
                                  const Word& s_n) {
  if (x_n.size() != y_n.size() || x_n.size() != s_n.size())
    throw std::invalid_argument("sequence_transition: length mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < x_n.size(); ++i) {
    const int s = s_n[i];
    if (s < 0 || static_cast<std::size_t>(s) >= family.size())
      throw std::invalid_argument("sequence_transition: state out of range");
    p *= family[static_cast<std::size_t>(s)].prob(x_n[i], y_n[i]);
    if (p == 0.0) return 0.0;
  }
  return p;
}

// Constant-state block transition prod_i ch(y_i | x_i).
inline double sequence_transition(const Channel& ch, const Word& x_n,
                                  const Word& y_n) {
  if (x_n.size() != y_n.size())
    throw std::invalid_argument("sequence_transition: length mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < x_n.size(); ++i) {
    p *= ch.prob(x_n[i], y_n[i]);
    if (p == 0.0) return 0.0;
  }
  return p;
}

// Memoryless k-fold product ch^k as an explicit |A|^k x |B|^k channel.
inline Channel product_channel(const Channel& ch, int k,
                               double budget = default_budget()) {
  if (k < 1) throw std::invalid_argument("product_channel: k < 1");
  const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(ch.in_size()),
                                       static_cast<unsigned>(k));
  const std::uint64_t bk = pow_checked(static_cast<std::uint64_t>(ch.out_size()),
                                       static_cast<unsigned>(k));
  check_budget(static_cast<double>(ak) * static_cast<double>(bk) * k, budget,
               "product_channel");
  std::vector<double> w(static_cast<std::size_t>(ak * bk));
  Word x(static_cast<std::size_t>(k), 0);
  std::size_t idx = 0;
  do {
    Word y(static_cast<std::size_t>(k), 0);
    do {
      w[idx++] = sequence_transition(ch, x, y);
    } while (next_word(y, ch.out_size()));
  } while (next_word(x, ch.in_size()));
  return Channel(static_cast<int>(ak), static_cast<int>(bk), std::move(w));
}

// Per-letter varying product: letters[i] applied at position i.
inline Channel sequence_product_channel(const std::vector<Channel>& family,
                                        const Word& s_k,
                                        double budget = default_budget()) {
  if (s_k.empty()) throw std::invalid_argument("sequence_product_channel: empty");
  const int k = static_cast<int>(s_k.size());
  const int a = family.at(0).in_size(), b = family.at(0).out_size();
  const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(a),
                                       static_cast<unsigned>(k));
  const std::uint64_t bk = pow_checked(static_cast<std::uint64_t>(b),
                                       static_cast<unsigned>(k));
  check_budget(static_cast<double>(ak) * static_cast<double>(bk) * k, budget,
               "sequence_product_channel");
  std::vector<double> w(static_cast<std::size_t>(ak * bk));
  Word x(static_cast<std::size_t>(k), 0);
  std::size_t idx = 0;
  do {
    Word y(static_cast<std::size_t>(k), 0);
    do {
      w[idx++] = sequence_transition(family, x, y, s_k);
    } while (next_word(y, b));
  } while (next_word(x, a));
  return Channel(static_cast<int>(ak), static_cast<int>(bk), std::move(w));
}

// ---------------------------------------------------------------------------
// Prefixing and lifting.
// ---------------------------------------------------------------------------

// Precompose a k-letter block of the spec with a stochastic map
// T: U -> A^k.  The lifted family is over input alphabet U with the
// eavesdropper (and, for an AvwcSpec, the legit side too) ranging over
// length-k state words.
inline CavwcSpec prefix_channel(const CavwcSpec& spec, const Channel& t, int k,
                                double budget = default_budget()) {
  const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(spec.a_size()),
                                       static_cast<unsigned>(k));
  if (static_cast<std::uint64_t>(t.out_size()) != ak)
    throw std::invalid_argument("prefix_channel: T must map into A^k");
  std::vector<Channel> comp;
  comp.reserve(spec.compound.size());
  for (const auto& w : spec.compound)
    comp.push_back(chain(t, product_channel(w, k, budget)));
  std::vector<Channel> ev;
  const std::uint64_t sk = pow_checked(static_cast<std::uint64_t>(spec.s_size()),
                                       static_cast<unsigned>(k));
  ev.reserve(static_cast<std::size_t>(sk));
  Word s(static_cast<std::size_t>(k), 0);
  do {
    ev.push_back(chain(t, sequence_product_channel(spec.eaves, s, budget)));
  } while (next_word(s, spec.s_size()));
  return CavwcSpec(std::move(comp), std::move(ev));
}

inline AvwcSpec prefix_channel(const AvwcSpec& spec, const Channel& t, int k,
                               double budget = default_budget()) {
  const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(spec.a_size()),
                                       static_cast<unsigned>(k));
  if (static_cast<std::uint64_t>(t.out_size()) != ak)
    throw std::invalid_argument("prefix_channel: T must map into A^k");
  std::vector<std::string> names;
  std::vector<Channel> w_lift, v_lift;
  Word s(static_cast<std::size_t>(k), 0);
  do {
    names.push_back(word_to_string(s, spec.s_size()));
    w_lift.push_back(chain(t, sequence_product_channel(spec.legit, s, budget)));
    v_lift.push_back(chain(t, sequence_product_channel(spec.eaves, s, budget)));
  } while (next_word(s, spec.s_size()));
  return AvwcSpec(std::move(names), std::move(w_lift), std::move(v_lift));
}

// Build the k-letter compound/arbitrarily-varying view of an AVWC: the
// compound side collects the state-mixed products W_q^k over the supplied
// mixture grid, the eavesdropper side enumerates all length-k state words.
inline CavwcSpec k_letter_lift(const AvwcSpec& spec, int k,
                               const std::vector<Distribution>& q_grid,
                               double budget = default_budget()) {
  if (q_grid.empty()) throw std::invalid_argument("k_letter_lift: empty q grid");
  std::vector<Channel> comp;
  std::vector<Distribution> labels;
  comp.reserve(q_grid.size());
  for (const auto& q : q_grid) {
    if (q.size() != spec.s_size())
      throw std::invalid_argument("k_letter_lift: grid point size mismatch");
    comp.push_back(product_channel(mix_channel(spec.legit, q), k, budget));
    labels.push_back(q);
  }
  const std::uint64_t sk = pow_checked(static_cast<std::uint64_t>(spec.s_size()),
                                       static_cast<unsigned>(k));
  check_budget(static_cast<double>(sk), budget, "k_letter_lift (eaves states)");
  std::vector<Channel> ev;
  ev.reserve(static_cast<std::size_t>(sk));
  Word s(static_cast<std::size_t>(k), 0);
  do {
    ev.push_back(sequence_product_channel(spec.eaves, s, budget));
  } while (next_word(s, spec.s_size()));
  return CavwcSpec(std::move(comp), std::move(ev), std::move(labels));
}

// Mixture grid over P(S): all vertices, the uniform point, and `extra`
// seeded flat-Dirichlet samples.
inline std::vector<Distribution> default_q_grid(int s_size, int extra = 64,
                                                std::uint64_t seed = 1) {
  if (s_size < 1) throw std::invalid_argument("default_q_grid: s_size < 1");
  std::vector<Distribution> grid;
  for (int s = 0; s < s_size; ++s) grid.push_back(Distribution::point_mass(s_size, s));
  if (s_size > 1) grid.push_back(Distribution::uniform(s_size));
  Rng rng(seed);
  for (int i = 0; i < extra && s_size > 1; ++i) grid.push_back(rng.simplex_point(s_size));
  return grid;
}

// ---------------------------------------------------------------------------
// Degradedness.
// ---------------------------------------------------------------------------

// Decide whether V = T o W for some stochastic T: B -> C, by solving
//   minimize m  s.t.  |V(z|x) - sum_y W(y|x) T(z|y)| <= m  for all (x, z),
//                     T row-stochastic, T >= 0, m >= 0,
// and declaring feasibility when the optimal max-residual m* is <= tol.
// The minimizing T is returned either way, so near-misses are quantified.
inline DegradednessCertificate degraded_check(const Channel& w, const Channel& v,
                                              double tol = 1e-7) {
  if (w.in_size() != v.in_size())
    throw std::invalid_argument("degraded_check: input alphabets differ");
  const int a = w.in_size(), b = w.out_size(), c = v.out_size();

  // Variables: t_{y,z} (b*c of them), m, then one slack per inequality.
  const int nt = b * c;
  const int n_ineq = 2 * a * c;
  const int nvar = nt + 1 + n_ineq;
  const int nrow = n_ineq + b;
  std::vector<std::vector<double>> A(
      static_cast<std::size_t>(nrow),
      std::vector<double>(static_cast<std::size_t>(nvar), 0.0));
  std::vector<double> rhs(static_cast<std::size_t>(nrow), 0.0);
  int row = 0;
  for (int x = 0; x < a; ++x) {
    for (int z = 0; z < c; ++z) {
      // sum_y W(y|x) t_{y,z} - m + u = V(z|x)
      for (int y = 0; y < b; ++y)
        A[static_cast<std::size_t>(row)][static_cast<std::size_t>(y * c + z)] =
            w.prob(x, y);
      A[static_cast<std::size_t>(row)][static_cast<std::size_t>(nt)] = -1.0;
      A[static_cast<std::size_t>(row)][static_cast<std::size_t>(nt + 1 + row)] = 1.0;
      rhs[static_cast<std::size_t>(row)] = v.prob(x, z);
      ++row;
      // sum_y W(y|x) t_{y,z} + m - u' = V(z|x)
      for (int y = 0; y < b; ++y)
        A[static_cast<std::size_t>(row)][static_cast<std::size_t>(y * c + z)] =
            w.prob(x, y);
      A[static_cast<std::size_t>(row)][static_cast<std::size_t>(nt)] = 1.0;
      A[static_cast<std::size_t>(row)][static_cast<std::size_t>(nt + 1 + row)] = -1.0;
      rhs[static_cast<std::size_t>(row)] = v.prob(x, z);
      ++row;
    }
  }
  for (int y = 0; y < b; ++y) {
    for (int z = 0; z < c; ++z)
      A[static_cast<std::size_t>(row)][static_cast<std::size_t>(y * c + z)] = 1.0;
    rhs[static_cast<std::size_t>(row)] = 1.0;
    ++row;
  }
  std::vector<double> cost(static_cast<std::size_t>(nvar), 0.0);
  cost[static_cast<std::size_t>(nt)] = 1.0;

  LpResult lp = simplex_solve(A, rhs, cost);
  if (!lp.feasible)
    throw std::runtime_error("degraded_check: LP phase-1 failed (unexpected: "
                             "the relaxation is always feasible)");

  // Rebuild T from the solution, clamping round-off and renormalizing rows.
  std::vector<double> traw(static_cast<std::size_t>(nt));
  for (int y = 0; y < b; ++y) {
    double sum = 0.0;
    for (int z = 0; z < c; ++z) {
      double t = std::max(lp.x[static_cast<std::size_t>(y * c + z)], 0.0);
      traw[static_cast<std::size_t>(y * c + z)] = t;
      sum += t;
    }
    for (int z = 0; z < c; ++z) {
      if (sum > 0.0)
        traw[static_cast<std::size_t>(y * c + z)] /= sum;
      else
        traw[static_cast<std::size_t>(y * c + z)] = 1.0 / static_cast<double>(c);
    }
  }
  Channel t(b, c, std::move(traw));

  // Report the residual of the reconstructed (clean) T, not the LP value,
  // so the certificate is self-contained.
  Channel tw = chain(w, t);
  double resid = 0.0;
  for (int x = 0; x < a; ++x)
    for (int z = 0; z < c; ++z)
      resid = std::max(resid, std::abs(v.prob(x, z) - tw.prob(x, z)));

  DegradednessCertificate cert;
  cert.map = t;
  cert.residual = resid;
  cert.feasible = resid <= tol;
  return cert;
}

// Smallest state index s* such that every eavesdropper channel V_s is
// degraded with respect to V_{s*}; nullopt when no state dominates.
inline std::optional<int> best_eavesdropper_check(const AvwcSpec& spec,
                                                  double tol = 1e-7) {
  for (int cand = 0; cand < spec.s_size(); ++cand) {
    bool ok = true;
    for (int s = 0; s < spec.s_size() && ok; ++s) {
      if (s == cand) continue;
      ok = degraded_check(spec.eaves[static_cast<std::size_t>(cand)],
                          spec.eaves[static_cast<std::size_t>(s)], tol)
               .feasible;
    }
    if (ok) return cand;
  }
  return std::nullopt;
}

struct StrongDegradednessReport {
  bool product_structure_ok = false;  // W depends only on s1, V only on s2
  bool degraded_ok = false;           // every V_{s2} degraded from every gridded W_{q1}
  double max_residual = 0.0;
  std::string failure;  // empty when both checks pass
  bool holds() const { return product_structure_ok && degraded_ok; }
};

// Grid-based check that states factor as S = S1 x S2 (ordered
// s = s1 * |S2| + s2), with the legit side a function of s1 only, the
// eavesdropper side a function of s2 only, and every V_{s2} degraded with
// respect to W_{q1} for every q1 in the grid.  Grid-based: a pass certifies
// the sampled mixtures only; a failure is a definitive refutation.
inline StrongDegradednessReport strongly_degraded_check(
    const AvwcSpec& spec, int s1_size, int s2_size,
    const std::vector<Distribution>& q1_grid, double tol = 1e-7) {
  if (s1_size < 1 || s2_size < 1 || s1_size * s2_size != spec.s_size())
    throw std::invalid_argument(
        "strongly_degraded_check: |S| != |S1| * |S2| with the given split");
  StrongDegradednessReport rep;

  // Product structure, exact comparison.
  for (int s1 = 0; s1 < s1_size; ++s1) {
    const Channel& ref = spec.legit[static_cast<std::size_t>(s1 * s2_size)];
    for (int s2 = 1; s2 < s2_size; ++s2) {
      const Channel& other = spec.legit[static_cast<std::size_t>(s1 * s2_size + s2)];
      for (std::size_t i = 0; i < ref.raw().size(); ++i)
        if (std::abs(ref.raw()[i] - other.raw()[i]) > 1e-12) {
          rep.failure = "legit channel varies with s2 (state " +
                        std::to_string(s1 * s2_size + s2) + ")";
          return rep;
        }
    }
  }
  for (int s2 = 0; s2 < s2_size; ++s2) {
    const Channel& ref = spec.eaves[static_cast<std::size_t>(s2)];
    for (int s1 = 1; s1 < s1_size; ++s1) {
      const Channel& other = spec.eaves[static_cast<std::size_t>(s1 * s2_size + s2)];
      for (std::size_t i = 0; i < ref.raw().size(); ++i)
        if (std::abs(ref.raw()[i] - other.raw()[i]) > 1e-12) {
          rep.failure = "eaves channel varies with s1 (state " +
                        std::to_string(s1 * s2_size + s2) + ")";
          return rep;
        }
    }
  }
  rep.product_structure_ok = true;

  // Distinct marginal families.
  std::vector<Channel> w1;  // indexed by s1
  for (int s1 = 0; s1 < s1_size; ++s1)
    w1.push_back(spec.legit[static_cast<std::size_t>(s1 * s2_size)]);
  std::vector<Channel> v2;  // indexed by s2
  for (int s2 = 0; s2 < s2_size; ++s2)
    v2.push_back(spec.eaves[static_cast<std::size_t>(s2)]);

  rep.degraded_ok = true;
  for (const auto& q1 : q1_grid) {
    if (q1.size() != s1_size)
      throw std::invalid_argument("strongly_degraded_check: grid point over wrong set");
    Channel wq = mix_channel(w1, q1);
    for (int s2 = 0; s2 < s2_size; ++s2) {
      DegradednessCertificate cert = degraded_check(wq, v2[static_cast<std::size_t>(s2)], tol);
      rep.max_residual = std::max(rep.max_residual, cert.residual);
      if (!cert.feasible) {
        rep.degraded_ok = false;
        rep.failure = "V_{s2=" + std::to_string(s2) +
                      "} not degraded from a gridded W_{q1} (residual " +
                      std::to_string(cert.residual) + ")";
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Distances between channels and channel families.
// ---------------------------------------------------------------------------

// max over inputs of the (unhalved) row total variation.
inline double operator_norm_distance(const Channel& w, const Channel& w2) {
  if (w.in_size() != w2.in_size() || w.out_size() != w2.out_size())
    throw std::invalid_argument("operator_norm_distance: dimension mismatch");
  double d = 0.0;
  for (int x = 0; x < w.in_size(); ++x) {
    double row = 0.0;
    for (int y = 0; y < w.out_size(); ++y)
      row += std::abs(w.prob(x, y) - w2.prob(x, y));
    d = std::max(d, row);
  }
  return d;
}

namespace detail {
inline double one_sided_family_distance(const std::vector<Channel>& from,
                                        const std::vector<Channel>& to) {
  double worst = 0.0;
  for (const auto& f : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : to) best = std::min(best, operator_norm_distance(f, t));
    worst = std::max(worst, best);
  }
  return worst;
}
}  // namespace detail

// Symmetric worst-case nearest-neighbor distance over both the legit and the
// eavesdropper families (the max of the four one-sided distances).
inline double hausdorff_distance(const AvwcSpec& a, const AvwcSpec& b) {
  if (a.a_size() != b.a_size() || a.b_size() != b.b_size() || a.c_size() != b.c_size())
    throw std::invalid_argument("hausdorff_distance: alphabet mismatch");
  double d = detail::one_sided_family_distance(a.legit, b.legit);
  d = std::max(d, detail::one_sided_family_distance(b.legit, a.legit));
  d = std::max(d, detail::one_sided_family_distance(a.eaves, b.eaves));
  d = std::max(d, detail::one_sided_family_distance(b.eaves, a.eaves));
  return d;
}

// Utility used by the continuity tests: repeat each state `copies` times
// (Hausdorff distance 0 from the original).
inline AvwcSpec duplicate_states(const AvwcSpec& spec, int copies = 2) {
  if (copies < 1) throw std::invalid_argument("duplicate_states: copies < 1");
  AvwcSpec out;
  for (int rep = 0; rep < copies; ++rep)
    for (int s = 0; s < spec.s_size(); ++s) {
      out.state_names.push_back(
          (spec.state_names.empty() ? "s" + std::to_string(s)
                                    : spec.state_names[static_cast<std::size_t>(s)]) +
          (rep ? "+" + std::to_string(rep) : ""));
      out.legit.push_back(spec.legit[static_cast<std::size_t>(s)]);
      out.eaves.push_back(spec.eaves[static_cast<std::size_t>(s)]);
    }
  out.validate();
  return out;
}

}  // namespace avwc
