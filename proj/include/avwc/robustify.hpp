#pragma once

// Permutation symmetrization of compound wiretap codes:
//   * coordinate permutations and permuted copies of a code,
//   * correlated codes (a finitely supported mixture of permuted copies,
//     shared between sender and receiver but hidden from the jammer),
//   * exact error/leakage of a correlated code under varying states,
//   * the permutation-average lemma for [0,1] functions of state words and
//     the joint-law permutation identity, both checkable exhaustively at
//     small blocklength.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/channel.hpp"
#include "avwc/code.hpp"
#include "avwc/prob.hpp"
#include "avwc/sequence.hpp"

namespace avwc {

// ---------------------------------------------------------------------------
// Permutations of block coordinates.  The action on words is
// (pi(w))_i = w[map[i]]; all helpers share this convention.
// ---------------------------------------------------------------------------
struct Permutation {
  std::vector<int> map;

  Permutation() = default;
  explicit Permutation(std::vector<int> m) : map(std::move(m)) {
    std::vector<char> seen(map.size(), 0);
    for (int v : map) {
      if (v < 0 || static_cast<std::size_t>(v) >= map.size() || seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("Permutation: not a bijection");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }

  int size() const { return static_cast<int>(map.size()); }

  static Permutation identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(m));
  }

  Permutation inverse() const {
    std::vector<int> m(map.size());
    for (std::size_t i = 0; i < map.size(); ++i)
      m[static_cast<std::size_t>(map[i])] = static_cast<int>(i);
    return Permutation(std::move(m));
  }

  Word apply(const Word& w) const { return apply_permutation(map, w); }

  bool is_identity() const {
    for (std::size_t i = 0; i < map.size(); ++i)
      if (map[i] != static_cast<int>(i)) return false;
    return true;
  }
};

inline Permutation random_permutation(int n, Rng& rng) {
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(rng.index(i + 1))]);
  return Permutation(std::move(m));
}

inline std::vector<Permutation> all_permutations(int n) {
  if (n < 1 || n > 8)
    throw BudgetError("all_permutations: full enumeration supported for n <= 8 only");
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(m));
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Permuted codes and correlated codes.
// ---------------------------------------------------------------------------

// Apply the permutation to every codeword.  Because the typicality decoder
// depends only on joint letter counts — which coordinate permutations leave
// unchanged — decoding the permuted code at pi(y^n) reproduces decoding the
// base code at y^n, which is the defining property of the permuted decoder
// sets.
inline WiretapCode permute_code(const WiretapCode& code, const Permutation& pi) {
  if (pi.size() != code.n())
    throw std::invalid_argument("permute_code: permutation length != blocklength");
  WiretapCode out = code;
  for (Word& w : out.codebook.words) w = pi.apply(w);
  return out;
}

// A finitely supported mixture of permuted copies of one base code.  The
// realized permutation is shared by sender and receiver (correlated
// randomness) and unknown to the state selector.
struct CorrelatedCode {
  WiretapCode base;
  std::vector<Permutation> permutations;
  Distribution weights;
  int support_cap = 0;  // 0: uncapped

  void validate() const {
    if (permutations.empty())
      throw std::invalid_argument("CorrelatedCode: empty support");
    if (weights.size() != static_cast<int>(permutations.size()))
      throw std::invalid_argument("CorrelatedCode: weight/support size mismatch");
    if (support_cap > 0 && static_cast<int>(permutations.size()) > support_cap)
      throw std::invalid_argument("CorrelatedCode: support exceeds cap");
    for (const auto& p : permutations)
      if (p.size() != base.n())
        throw std::invalid_argument("CorrelatedCode: permutation length mismatch");
  }

  int members() const { return static_cast<int>(permutations.size()); }
  WiretapCode member(int i) const {
    return permute_code(base, permutations.at(static_cast<std::size_t>(i)));
  }
};

// Uniform mixture over permuted copies.  full = true enumerates the whole
// symmetric group (n <= 6; n! members), ignoring m; otherwise m permutations
// are sampled i.i.d. uniformly.
inline CorrelatedCode robustify(const WiretapCode& code, int m, std::uint64_t seed,
                                bool full = false) {
  CorrelatedCode cc;
  cc.base = code;
  if (full) {
    if (code.n() > 6)
      throw BudgetError(
          "robustify: full symmetric-group mode needs n <= 6 (n! members)");
    cc.permutations = all_permutations(code.n());
  } else {
    if (m < 1) throw std::invalid_argument("robustify: m < 1");
    Rng rng(seed);
    cc.permutations.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      cc.permutations.push_back(random_permutation(code.n(), rng));
  }
  cc.weights = Distribution::uniform(cc.members());
  cc.validate();
  return cc;
}

// ---------------------------------------------------------------------------
// Correlated-code evaluation.
// ---------------------------------------------------------------------------

struct CorrelatedErrorReport {
  double message_error = 0.0;  // max over states of the weighted member error
  double pair_error = 0.0;
  Word worst_s_n;
};

// Weighted average of member errors per state word, maximized over the
// given words (empty list: all |S|^n).  Members are evaluated directly; the
// permutation identity relating member errors across states is a theorem
// checked elsewhere, not assumed here.
inline CorrelatedErrorReport correlated_error(const CorrelatedCode& cc,
                                              const AvwcSpec& spec,
                                              const std::vector<Word>& states,
                                              const ErrorOptions& opts = {}) {
  cc.validate();
  spec.validate();
  const int n = cc.base.n();
  std::vector<Word> all;
  const std::vector<Word>* list = &states;
  if (states.empty()) {
    const double sn = std::pow(static_cast<double>(spec.s_size()), n);
    check_budget(sn * cc.members(), opts.budget_or_default(),
                 "correlated_error (state enumeration)");
    Word s(static_cast<std::size_t>(n), 0);
    do {
      all.push_back(s);
    } while (next_word(s, spec.s_size()));
    list = &all;
  }
  std::vector<WiretapCode> member_codes;
  member_codes.reserve(static_cast<std::size_t>(cc.members()));
  for (int g = 0; g < cc.members(); ++g) member_codes.push_back(cc.member(g));

  CorrelatedErrorReport rep;
  for (const Word& s_n : *list) {
    double msg = 0.0, pair = 0.0;
    for (int g = 0; g < cc.members(); ++g) {
      ErrorOptions mo = opts;
      mo.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(g));
      ErrorReport r = average_error(member_codes[static_cast<std::size_t>(g)], spec,
                                    {s_n}, mo);
      msg += cc.weights[g] * r.message_error;
      pair += cc.weights[g] * r.pair_error;
    }
    if (msg >= rep.message_error) {
      rep.message_error = msg;
      rep.worst_s_n = s_n;
    }
    rep.pair_error = std::max(rep.pair_error, pair);
  }
  return rep;
}

struct CorrelatedLeakage {
  double mean_bits = 0.0;  // leakage averaged over the shared randomness
  double max_bits = 0.0;   // worst member on the support
};

inline CorrelatedLeakage correlated_leakage(const CorrelatedCode& cc, const Word& s_n,
                                            double budget = default_budget()) {
  cc.validate();
  CorrelatedLeakage out;
  for (int g = 0; g < cc.members(); ++g) {
    const double bits = leakage(cc.member(g), s_n, budget);
    out.mean_bits += cc.weights[g] * bits;
    out.max_bits = std::max(out.max_bits, bits);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Permutation-average lemma for [0,1] functions of state words.
//
// Hypothesis: for every length-n type q over S,
//     sum_{s^n} f(s^n) prod_i q(s_i)  >=  1 - eps.
// Conclusion: for every s^n,
//     (1/n!) sum_pi f(pi(s^n))  >=  1 - 3 (n+1)^{|S|} eps.
// The permutation average of f at s^n equals the plain average of f over
// the type class of s^n, so both sides are evaluated exactly per type.
// ---------------------------------------------------------------------------

struct RtReport {
  bool hypothesis_holds = false;
  double hypothesis_margin = 0.0;  // min over types of (lhs - (1 - eps))
  bool conclusion_holds = false;   // meaningful only when the hypothesis holds
  double conclusion_margin = 0.0;  // min over types of (avg - bound)
  double bound = 0.0;              // 1 - 3 (n+1)^{|S|} eps
  int types_checked = 0;
  double eps = 0.0;
};

inline RtReport rt_check(const std::vector<double>& f_table, int n, int s_size,
                         double eps, double budget = default_budget()) {
  if (n < 1 || s_size < 1) throw std::invalid_argument("rt_check: bad dimensions");
  if (!(eps >= 0.0)) throw std::invalid_argument("rt_check: eps < 0");
  const std::uint64_t sn = pow_checked(static_cast<std::uint64_t>(s_size),
                                       static_cast<unsigned>(n));
  if (f_table.size() != sn)
    throw std::invalid_argument("rt_check: table must cover all state words");
  for (double v : f_table)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("rt_check: f values must lie in [0,1]");
  const auto types = compositions(n, s_size);
  check_budget(static_cast<double>(sn) * (static_cast<double>(types.size()) + 1.0),
               budget, "rt_check (type enumeration)");

  // Bucket words by type and accumulate class sums.
  std::map<std::vector<int>, std::pair<double, std::uint64_t>> classes;
  Word s(static_cast<std::size_t>(n), 0);
  std::size_t idx = 0;
  do {
    std::vector<int> counts = letter_counts(s, s_size);
    auto& cls = classes[counts];
    cls.first += f_table[idx];
    cls.second += 1;
    ++idx;
  } while (next_word(s, s_size));

  RtReport rep;
  rep.eps = eps;
  rep.bound = 1.0 - 3.0 * type_count_bound(n, s_size) * eps;
  rep.types_checked = static_cast<int>(types.size());
  rep.hypothesis_margin = std::numeric_limits<double>::infinity();
  rep.conclusion_margin = std::numeric_limits<double>::infinity();

  for (const auto& counts : types) {
    // Product weight of each word under the type's distribution depends only
    // on its counts: prod_a q_a^{N_a} with q_a = counts_a / n.
    double lhs = 0.0;
    Word w(static_cast<std::size_t>(n), 0);
    std::size_t wi = 0;
    do {
      std::vector<int> wc = letter_counts(w, s_size);
      double p = 1.0;
      for (int a = 0; a < s_size; ++a) {
        const double qa = static_cast<double>(counts[static_cast<std::size_t>(a)]) /
                          static_cast<double>(n);
        const int na = wc[static_cast<std::size_t>(a)];
        if (na > 0) {
          if (qa == 0.0) {
            p = 0.0;
            break;
          }
          p *= std::pow(qa, na);
        }
      }
      lhs += f_table[wi] * p;
      ++wi;
    } while (next_word(w, s_size));
    rep.hypothesis_margin = std::min(rep.hypothesis_margin, lhs - (1.0 - eps));

    const auto& cls = classes.at(counts);
    const double avg = cls.first / static_cast<double>(cls.second);
    rep.conclusion_margin = std::min(rep.conclusion_margin, avg - rep.bound);
  }
  rep.hypothesis_holds = rep.hypothesis_margin >= -1e-12;
  rep.conclusion_holds = rep.conclusion_margin >= -1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Joint-law permutation identity.
//
// For the joint law of (message, eavesdropper block output): permuting the
// output of the base code at state word s^n equals running the permuted
// code at the permuted state word, exactly:
//     P_{M, pi(Z_{s^n}(id))} = P_{M, Z_{pi(s^n)}(pi)}.
// ---------------------------------------------------------------------------

struct PermIdentityReport {
  bool equal = false;
  double max_abs_diff = 0.0;
};

inline PermIdentityReport perm_identity_check(const WiretapCode& code, const Word& s_n,
                                              const Permutation& pi,
                                              double budget = default_budget(),
                                              double tol = 1e-12) {
  if (pi.size() != code.n())
    throw std::invalid_argument("perm_identity_check: permutation length mismatch");
  const int c = code.channels.c_size();
  Channel base_laws = message_conditional_laws(code, s_n, budget);
  WiretapCode permuted = permute_code(code, pi);
  Channel perm_laws = message_conditional_laws(permuted, pi.apply(s_n), budget);

  // P[pi(Z) = z] = P[Z = pi^{-1}(z)].
  const Permutation inv = pi.inverse();
  PermIdentityReport rep;
  Word z(static_cast<std::size_t>(code.n()), 0);
  std::size_t zi = 0;
  do {
    const std::uint64_t src = word_rank(inv.apply(z), c);
    for (long long j = 0; j < code.J(); ++j) {
      const double lhs = base_laws.prob(static_cast<int>(j), static_cast<int>(src));
      const double rhs = perm_laws.prob(static_cast<int>(j), static_cast<int>(zi));
      rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(lhs - rhs));
    }
    ++zi;
  } while (next_word(z, c));
  rep.equal = rep.max_abs_diff <= tol;
  return rep;
}

}  // namespace avwc
