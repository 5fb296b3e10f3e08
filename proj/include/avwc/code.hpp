#pragma once

// Finite-blocklength random wiretap codes, executable exactly at desk scale:
//   * code-size derivation from single-letter rate/resolvability terms,
//   * i.i.d. codebook sampling conditioned on the typical set,
//   * stochastic encoding and typicality decoding against a compound list,
//   * exact (or Monte-Carlo) average error and message leakage,
//   * the measure-family secrecy audit: per-state reference measures Theta,
//     the clipped channel Q, concentration events iota_1/iota_2, and the
//     associated mass / total-variation diagnostics with instantiated
//     small-blocklength tail constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/channel.hpp"
#include "avwc/prob.hpp"
#include "avwc/sequence.hpp"

namespace avwc {

// ---------------------------------------------------------------------------
// Parameters and containers.
// ---------------------------------------------------------------------------

struct CodeParams {
  int n = 1;              // blocklength
  double tau = 0.2;       // rate slack
  double delta = 0.15;    // typicality width (loose on purpose at small n)
  double alpha = 0.1;     // secrecy exponent: epsilon_n = 2^(-n*alpha)
  long long J = 1;        // messages
  long long L = 1;        // randomization indices per message
  Distribution input_dist;

  void validate() const {
    if (n < 1) throw std::invalid_argument("CodeParams: n < 1");
    if (!(tau > 0.0)) throw std::invalid_argument("CodeParams: tau <= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("CodeParams: delta <= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("CodeParams: alpha <= 0");
    if (J < 1 || L < 1) throw std::invalid_argument("CodeParams: J, L >= 1 required");
    if (input_dist.size() < 1)
      throw std::invalid_argument("CodeParams: missing input distribution");
  }

  double epsilon_n() const { return std::exp2(-static_cast<double>(n) * alpha); }
};

struct CodeSizes {
  long long J = 1;
  long long L = 1;
  double min_legit_bits = 0.0;  // min over the compound list of I(X;Y_r)
  double max_eaves_bits = 0.0;  // max over eavesdropper states of I(X;Z_s)
};

// J = floor(2^{n(min_r I(X;Y_r) - max I(X;Z) - tau)}),
// L = floor(2^{n(max I(X;Z) + tau/4)}), both clamped below at 1.  The
// eavesdropper maximum over mixture weights is attained at a vertex, so the
// finite state enumeration is exact.
inline CodeSizes derive_code_sizes(const CavwcSpec& spec,
                                   const Distribution& input_dist, double tau,
                                   int n) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("derive_code_sizes: n < 0");
  if (!(tau > 0.0)) throw std::invalid_argument("derive_code_sizes: tau <= 0");
  if (input_dist.size() != spec.a_size())
    throw std::invalid_argument("derive_code_sizes: input alphabet mismatch");
  CodeSizes out;
  out.min_legit_bits = std::numeric_limits<double>::infinity();
  for (const auto& w : spec.compound)
    out.min_legit_bits = std::min(out.min_legit_bits, mutual_information(input_dist, w));
  out.max_eaves_bits = 0.0;
  for (const auto& v : spec.eaves)
    out.max_eaves_bits = std::max(out.max_eaves_bits, mutual_information(input_dist, v));
  const double nd = static_cast<double>(n);
  const double j_exp = nd * (out.min_legit_bits - out.max_eaves_bits - tau);
  const double l_exp = nd * (out.max_eaves_bits + tau / 4.0);
  out.J = std::max<long long>(1, static_cast<long long>(std::floor(std::exp2(j_exp))));
  out.L = std::max<long long>(1, static_cast<long long>(std::floor(std::exp2(l_exp))));
  return out;
}

struct Codebook {
  CodeParams params;
  std::uint64_t seed = 0;
  std::vector<Word> words;  // row-major: index j * L + l

  const Word& word(long long j, long long l) const {
    if (j < 0 || j >= params.J || l < 0 || l >= params.L)
      throw std::out_of_range("Codebook::word: index out of range");
    return words[static_cast<std::size_t>(j * params.L + l)];
  }
};

namespace code_detail {

// Typicality of a word depends on its letter counts only, so emptiness of
// the typical set is decidable exactly by scanning count vectors.
inline bool typical_set_nonempty(int n, const Distribution& p, double delta) {
  for (const auto& comp : compositions(n, p.size())) {
    Word w;
    for (int a = 0; a < p.size(); ++a)
      w.insert(w.end(), static_cast<std::size_t>(comp[static_cast<std::size_t>(a)]), a);
    if (is_typical(w, p, delta)) return true;
  }
  return false;
}

}  // namespace code_detail

// i.i.d. codewords conditioned on the typical set, drawn by rejection from
// the product input law.  Fails up front (with advice) if no word of any
// type is typical at this (n, delta).
inline Codebook sample_codebook(const CodeParams& params, std::uint64_t seed) {
  params.validate();
  if (!code_detail::typical_set_nonempty(params.n, params.input_dist, params.delta))
    throw std::invalid_argument(
        "sample_codebook: the typical set is empty at this (n, delta); "
        "raise delta or the blocklength");
  Codebook cb;
  cb.params = params;
  cb.seed = seed;
  Rng rng(seed);
  const long long total = params.J * params.L;
  cb.words.reserve(static_cast<std::size_t>(total));
  const long long attempt_cap = 10000000;
  long long attempts = 0;
  for (long long i = 0; i < total; ++i) {
    Word x(static_cast<std::size_t>(params.n));
    do {
      if (++attempts > attempt_cap)
        throw BudgetError(
            "sample_codebook: rejection sampling exceeded 1e7 draws; the "
            "typical set has vanishing mass — raise delta");
      for (int t = 0; t < params.n; ++t)
        x[static_cast<std::size_t>(t)] = rng.sample(params.input_dist);
    } while (!is_typical(x, params.input_dist, params.delta));
    cb.words.push_back(std::move(x));
  }
  return cb;
}

// A usable code: the codebook plus the channel model it is decoded against
// (finite compound legit list; per-letter varying eavesdropper family).
struct WiretapCode {
  Codebook codebook;
  CavwcSpec channels;

  const CodeParams& params() const { return codebook.params; }
  int n() const { return codebook.params.n; }
  long long J() const { return codebook.params.J; }
  long long L() const { return codebook.params.L; }
};

inline WiretapCode make_wiretap_code(const CavwcSpec& spec, const CodeParams& params,
                                     std::uint64_t seed) {
  spec.validate();
  if (params.input_dist.size() != spec.a_size())
    throw std::invalid_argument("make_wiretap_code: input alphabet mismatch");
  WiretapCode code;
  code.codebook = sample_codebook(params, seed);
  code.channels = spec;
  return code;
}

// Stochastic encoder: message j emits codeword (j, l) with l uniform.
inline Word encode(const WiretapCode& code, long long j, Rng& rng) {
  if (j < 0 || j >= code.J()) throw std::out_of_range("encode: message out of range");
  const long long l = rng.index(static_cast<int>(code.L()));
  return code.codebook.word(j, l);
}

// Typicality decoder.  A pair (j, l) claims y^n when y^n is conditionally
// typical for codeword x_jl under at least one channel of the compound
// list; y^n decodes to the unique claimant, and to the first pair (0, 0)
// when no pair or more than one pair claims it (the first pair absorbs all
// unassigned outputs, making the decoder total).
inline std::pair<long long, long long> decode(const WiretapCode& code, const Word& y) {
  if (static_cast<int>(y.size()) != code.n())
    throw std::invalid_argument("decode: output length mismatch");
  const double delta = code.params().delta;
  long long found_j = -1, found_l = -1;
  for (long long j = 0; j < code.J(); ++j)
    for (long long l = 0; l < code.L(); ++l) {
      const Word& x = code.codebook.word(j, l);
      bool claims = false;
      for (const auto& w : code.channels.compound)
        if (is_cond_typical(y, x, w, delta)) {
          claims = true;
          break;
        }
      if (!claims) continue;
      if (found_j >= 0) return {0, 0};  // ambiguous
      found_j = j;
      found_l = l;
    }
  if (found_j < 0) return {0, 0};  // unassigned
  return {found_j, found_l};
}

// ---------------------------------------------------------------------------
// Average error.
// ---------------------------------------------------------------------------

struct ErrorOptions {
  bool monte_carlo = false;
  long long samples = 100000;
  std::uint64_t seed = 1;
  double budget = -1.0;

  double budget_or_default() const { return budget < 0 ? default_budget() : budget; }
};

struct ErrorReport {
  double message_error = 0.0;  // P[decoded message != sent message]
  double pair_error = 0.0;     // P[decoded (j,l) != sent (j,l)]
  int worst_r = -1;            // compound evaluations: worst list index
  Word worst_s_n;              // varying-state evaluations: worst state word
};

namespace code_detail {

// Per-letter channel access for a block: either one constant channel or a
// family indexed by a state word.
struct LetterChannels {
  const Channel* constant = nullptr;
  const std::vector<Channel>* family = nullptr;
  const Word* states = nullptr;

  const Channel& at(int i) const {
    return constant ? *constant
                    : (*family)[static_cast<std::size_t>((*states)[static_cast<std::size_t>(i)])];
  }
};

inline void error_exact(const WiretapCode& code, const LetterChannels& ch,
                        double budget, double* msg_err, double* pair_err) {
  const int n = code.n();
  const int b = code.channels.b_size();
  const long long total = code.J() * code.L();
  const double yn = std::pow(static_cast<double>(b), n);
  check_budget(yn * static_cast<double>(total) *
                   (static_cast<double>(code.channels.r_size()) * n + n),
               budget, "average_error (exact output enumeration)");
  double msg_ok = 0.0, pair_ok = 0.0;
  Word y(static_cast<std::size_t>(n), 0);
  do {
    const auto dec = decode(code, y);
    for (long long j = 0; j < code.J(); ++j)
      for (long long l = 0; l < code.L(); ++l) {
        const Word& x = code.codebook.word(j, l);
        double p = 1.0;
        for (int i = 0; i < n; ++i)
          p *= ch.at(i).prob(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
        if (p == 0.0) continue;
        if (dec.first == j) {
          msg_ok += p;
          if (dec.second == l) pair_ok += p;
        }
      }
  } while (next_word(y, b));
  const double denom = static_cast<double>(total);
  *msg_err = std::clamp(1.0 - msg_ok / denom, 0.0, 1.0);
  *pair_err = std::clamp(1.0 - pair_ok / denom, 0.0, 1.0);
}

inline void error_monte_carlo(const WiretapCode& code, const LetterChannels& ch,
                              long long samples, std::uint64_t seed,
                              double* msg_err, double* pair_err) {
  if (samples < 1) throw std::invalid_argument("average_error: samples < 1");
  const int n = code.n();
  Rng rng(seed);
  long long msg_bad = 0, pair_bad = 0;
  Word y(static_cast<std::size_t>(n));
  for (long long t = 0; t < samples; ++t) {
    const long long j = rng.index(static_cast<int>(code.J()));
    const long long l = rng.index(static_cast<int>(code.L()));
    const Word& x = code.codebook.word(j, l);
    for (int i = 0; i < n; ++i)
      y[static_cast<std::size_t>(i)] =
          rng.sample(ch.at(i).row_dist(x[static_cast<std::size_t>(i)]));
    const auto dec = decode(code, y);
    if (dec.first != j) ++msg_bad;
    if (dec.first != j || dec.second != l) ++pair_bad;
  }
  *msg_err = static_cast<double>(msg_bad) / static_cast<double>(samples);
  *pair_err = static_cast<double>(pair_bad) / static_cast<double>(samples);
}

}  // namespace code_detail

// Worst-case average error over the finite compound list (the state is
// constant across the block).
inline ErrorReport average_error(const WiretapCode& code, const CavwcSpec& spec,
                                 const ErrorOptions& opts = {}) {
  spec.validate();
  ErrorReport rep;
  for (int r = 0; r < spec.r_size(); ++r) {
    code_detail::LetterChannels ch;
    ch.constant = &spec.compound[static_cast<std::size_t>(r)];
    double msg = 0.0, pair = 0.0;
    if (opts.monte_carlo)
      code_detail::error_monte_carlo(code, ch, opts.samples,
                                     derive_seed(opts.seed, static_cast<std::uint64_t>(r)),
                                     &msg, &pair);
    else
      code_detail::error_exact(code, ch, opts.budget_or_default(), &msg, &pair);
    if (msg >= rep.message_error) {
      rep.message_error = msg;
      rep.worst_r = r;
    }
    rep.pair_error = std::max(rep.pair_error, pair);
  }
  return rep;
}

// Worst-case average error over per-letter varying states.  `states` lists
// the words to test; an empty list means exhaustive enumeration of all
// |S|^n words (budget permitting).
inline ErrorReport average_error(const WiretapCode& code, const AvwcSpec& spec,
                                 const std::vector<Word>& states,
                                 const ErrorOptions& opts = {}) {
  spec.validate();
  const int n = code.n();
  std::vector<Word> all;
  const std::vector<Word>* list = &states;
  if (states.empty()) {
    const double sn = std::pow(static_cast<double>(spec.s_size()), n);
    check_budget(sn, opts.budget_or_default(), "average_error (state enumeration)");
    Word s(static_cast<std::size_t>(n), 0);
    do {
      all.push_back(s);
    } while (next_word(s, spec.s_size()));
    list = &all;
  }
  ErrorReport rep;
  std::uint64_t idx = 0;
  for (const Word& s_n : *list) {
    if (static_cast<int>(s_n.size()) != n)
      throw std::invalid_argument("average_error: state word length mismatch");
    for (int v : s_n)
      if (v < 0 || v >= spec.s_size())
        throw std::invalid_argument("average_error: state letter out of range");
    code_detail::LetterChannels ch;
    ch.family = &spec.legit;
    ch.states = &s_n;
    double msg = 0.0, pair = 0.0;
    if (opts.monte_carlo)
      code_detail::error_monte_carlo(code, ch, opts.samples,
                                     derive_seed(opts.seed, idx), &msg, &pair);
    else
      code_detail::error_exact(code, ch, opts.budget_or_default(), &msg, &pair);
    if (msg >= rep.message_error) {
      rep.message_error = msg;
      rep.worst_s_n = s_n;
    }
    rep.pair_error = std::max(rep.pair_error, pair);
    ++idx;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Leakage.
// ---------------------------------------------------------------------------

// Message-conditional eavesdropper output laws for the state word s^n:
// row j is P(z^n | M = j) = (1/L) sum_l prod_i V_{s_i}(z_i | x_{jl,i}),
// over the |C|^n output words in lexicographic order.
inline Channel message_conditional_laws(const WiretapCode& code, const Word& s_n,
                                        double budget = default_budget()) {
  const int n = code.n();
  if (static_cast<int>(s_n.size()) != n)
    throw std::invalid_argument("message_conditional_laws: state word length mismatch");
  for (int v : s_n)
    if (v < 0 || v >= code.channels.s_size())
      throw std::invalid_argument("message_conditional_laws: state letter out of range");
  const int c = code.channels.c_size();
  const std::uint64_t zn = pow_checked(static_cast<std::uint64_t>(c),
                                       static_cast<unsigned>(n));
  const long long total = code.J() * code.L();
  check_budget(static_cast<double>(zn) * static_cast<double>(total) * n, budget,
               "message_conditional_laws (output enumeration)");
  std::vector<double> rows(static_cast<std::size_t>(code.J()) * zn, 0.0);
  Word z(static_cast<std::size_t>(n), 0);
  std::size_t zi = 0;
  do {
    for (long long j = 0; j < code.J(); ++j) {
      double acc = 0.0;
      for (long long l = 0; l < code.L(); ++l) {
        const Word& x = code.codebook.word(j, l);
        double p = 1.0;
        for (int i = 0; i < n; ++i)
          p *= code.channels.eaves[static_cast<std::size_t>(s_n[static_cast<std::size_t>(i)])]
                   .prob(x[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(i)]);
        acc += p;
      }
      rows[static_cast<std::size_t>(j) * zn + zi] = acc / static_cast<double>(code.L());
    }
    ++zi;
  } while (next_word(z, c));
  return Channel(static_cast<int>(code.J()), static_cast<int>(zn), std::move(rows));
}

// Exact leakage I(M; Z^n_{s^n}) in bits, M uniform over the messages.
inline double leakage(const WiretapCode& code, const Word& s_n,
                      double budget = default_budget()) {
  Channel laws = message_conditional_laws(code, s_n, budget);
  return mutual_information(Distribution::uniform(static_cast<int>(code.J())), laws);
}

// ---------------------------------------------------------------------------
// Secrecy audit: reference measures and concentration events.
// ---------------------------------------------------------------------------

struct AuditOptions {
  bool monte_carlo = false;   // estimate the reference measure by sampling
  long long samples = 100000; // codeword draws in Monte-Carlo mode
  std::uint64_t seed = 1;
  double budget = -1.0;

  double budget_or_default() const { return budget < 0 ? default_budget() : budget; }
};

struct ThetaAudit {
  Word s_n;
  Distribution state_type;      // empirical type q of s^n
  double epsilon_n = 0.0;
  double e1_ceiling = 0.0;      // per-word probability cap defining E1
  long long z_typical_count = 0;  // |T| for the widened output-typicality set
  double theta_tilde_mass = 0.0;  // total mass of the untruncated measure
  double theta_mass = 0.0;        // total mass after the E2 truncation
  double mass_lower_bound = 0.0;  // 1 - 2*tail - epsilon_n (instantiated tail)
  bool mass_bound_flag = false;   // mass fell below the bound (small-n constants)
  double max_tv = 0.0;            // max_j || P(.|M=j) - Theta ||, in [0, 2]
  double tv_bound = 0.0;          // 4 (epsilon_n + tail)
  bool tv_bound_flag = false;     // iota_1 and iota_2 held, yet TV exceeded bound
  bool iota1_all = true;          // per-(j, z^n) bracket held everywhere
  bool iota2_all = true;          // per-j typical-state index count held
  long long iota1_violations = 0;
  long long iota2_violations = 0;
  double iota2_threshold = 0.0;   // (1 - epsilon_n)(1 - tail) L
  double leakage_bits = 0.0;
};

struct SecrecyAudit {
  std::vector<ThetaAudit> slices;
  double max_leakage = 0.0;
  double max_tv = 0.0;
  Word worst_s_n;
};

namespace code_detail {

// Everything about the reference measure that does not depend on the
// realized codebook: the typical-x support, the E1 ceiling, the widened
// z-typical set, Theta-tilde, E2 and Theta.
struct ThetaStructures {
  Distribution q;
  double epsilon_n = 0.0;
  double e1_ceiling = 0.0;
  std::vector<Word> z_words;        // all of C^n, lexicographic
  std::vector<char> z_typical;      // widened-typicality flags per z index
  long long z_typical_count = 0;
  std::vector<double> theta_tilde;  // per z index
  std::vector<char> e2;             // per z index
  std::vector<double> theta;        // per z index
  double theta_tilde_mass = 0.0;
  double theta_mass = 0.0;
  double tail_pair = 0.0;    // tail constant over (input, state) letter pairs
  double tail_triple = 0.0;  // tail constant over (input, state, output) triples

  double vn(const std::vector<Channel>& eaves, const Word& s_n, const Word& x,
            const Word& z) const {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      p *= eaves[static_cast<std::size_t>(s_n[i])].prob(x[i], z[i]);
    return p;
  }

  bool in_e1(const std::vector<Channel>& eaves, const Word& s_n, const Word& x,
             std::size_t zi) const {
    return z_typical[zi] != 0 &&
           vn(eaves, s_n, x, z_words[zi]) <= e1_ceiling + 1e-15;
  }
};

inline ThetaStructures build_theta_structures(const CodeParams& params,
                                              const CavwcSpec& channels,
                                              const Word& s_n,
                                              const AuditOptions& opts) {
  params.validate();
  const int n = params.n;
  if (static_cast<int>(s_n.size()) != n)
    throw std::invalid_argument("theta_audit: state word length mismatch");
  const int a = channels.a_size();
  const int c = channels.c_size();
  const int ns = channels.s_size();
  const double budget = opts.budget_or_default();

  ThetaStructures ts;
  ts.q = type_of(s_n, ns);
  ts.epsilon_n = params.epsilon_n();

  // E1 probability ceiling: 2^{-n (H(Z|X at mixture q) - f2)}, where f2 is
  // the per-sequence conditional log-probability modulus at slack 3|S|delta
  // over the positive (input, state, output) triples of the eavesdropper
  // family.
  Channel v_q = mix_channel(channels.eaves, ts.q);
  const double h_cond = conditional_entropy(params.input_dist, v_q);
  int support = 0;
  double w_min = 1.0;
  for (const auto& v : channels.eaves)
    for (int x = 0; x < a; ++x)
      for (int z = 0; z < c; ++z) {
        const double p = v.prob(x, z);
        if (p > 0.0) {
          ++support;
          w_min = std::min(w_min, p);
        }
      }
  const double f2 = conditional_logprob_modulus(3.0 * ns * params.delta, support, w_min);
  ts.e1_ceiling = std::exp2(-static_cast<double>(n) * (h_cond - f2));

  ts.tail_pair = typicality_tail_bound(n, params.delta, a * ns);
  ts.tail_triple = typicality_tail_bound(n, params.delta, a * ns * c);

  // Widened output-typicality set at slack 4|A||S|delta.
  const double z_slack = 4.0 * a * ns * params.delta;
  Distribution z_bar = v_q.push_forward(params.input_dist);
  const std::uint64_t zn = pow_checked(static_cast<std::uint64_t>(c),
                                       static_cast<unsigned>(n));
  check_budget(static_cast<double>(zn) * n, budget, "theta_audit (output scan)");
  ts.z_words.reserve(zn);
  ts.z_typical.resize(zn, 0);
  Word z(static_cast<std::size_t>(n), 0);
  std::size_t zi = 0;
  do {
    ts.z_words.push_back(z);
    if (is_typical(z, z_bar, z_slack)) {
      ts.z_typical[zi] = 1;
      ++ts.z_typical_count;
    }
    ++zi;
  } while (next_word(z, c));

  // Theta-tilde: expectation of V^n(z | X) restricted to E1 under the
  // typicality-conditioned input law.
  ts.theta_tilde.assign(zn, 0.0);
  if (!opts.monte_carlo) {
    const std::uint64_t an = pow_checked(static_cast<std::uint64_t>(a),
                                         static_cast<unsigned>(n));
    check_budget(static_cast<double>(an) * static_cast<double>(zn) * n, budget,
                 "theta_audit (exact expectation)");
    std::vector<Word> x_typ;
    std::vector<double> x_prob;
    double mass = 0.0;
    Word x(static_cast<std::size_t>(n), 0);
    do {
      if (is_typical(x, params.input_dist, params.delta)) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) p *= params.input_dist[x[static_cast<std::size_t>(i)]];
        x_typ.push_back(x);
        x_prob.push_back(p);
        mass += p;
      }
    } while (next_word(x, a));
    if (x_typ.empty())
      throw std::invalid_argument(
          "theta_audit: the typical set is empty at this (n, delta); raise delta");
    for (std::size_t xi = 0; xi < x_typ.size(); ++xi) {
      const double px = x_prob[xi] / mass;
      for (std::size_t zj = 0; zj < zn; ++zj) {
        if (!ts.z_typical[zj]) continue;
        const double v = ts.vn(channels.eaves, s_n, x_typ[xi], ts.z_words[zj]);
        if (v <= ts.e1_ceiling + 1e-15) ts.theta_tilde[zj] += px * v;
      }
    }
  } else {
    check_budget(static_cast<double>(opts.samples) * static_cast<double>(zn) * n,
                 budget, "theta_audit (Monte-Carlo expectation)");
    CodeParams draw = params;
    draw.J = 1;
    draw.L = opts.samples;
    Codebook cb = sample_codebook(draw, derive_seed(opts.seed, 0x7E7Aull));
    for (long long t = 0; t < opts.samples; ++t) {
      const Word& x = cb.word(0, t);
      for (std::size_t zj = 0; zj < zn; ++zj) {
        if (!ts.z_typical[zj]) continue;
        const double v = ts.vn(channels.eaves, s_n, x, ts.z_words[zj]);
        if (v <= ts.e1_ceiling + 1e-15)
          ts.theta_tilde[zj] += v / static_cast<double>(opts.samples);
      }
    }
  }

  // E2 keeps the z^n whose reference mass clears the per-point floor
  // epsilon_n / |T|; Theta is the truncation.
  const double floor_per_z =
      ts.z_typical_count > 0
          ? ts.epsilon_n / static_cast<double>(ts.z_typical_count)
          : std::numeric_limits<double>::infinity();
  ts.e2.assign(zn, 0);
  ts.theta.assign(zn, 0.0);
  for (std::size_t zj = 0; zj < zn; ++zj) {
    ts.theta_tilde_mass += ts.theta_tilde[zj];
    if (ts.z_typical[zj] && ts.theta_tilde[zj] >= floor_per_z) {
      ts.e2[zj] = 1;
      ts.theta[zj] = ts.theta_tilde[zj];
      ts.theta_mass += ts.theta_tilde[zj];
    }
  }
  return ts;
}

}  // namespace code_detail

// Audit one state word: build the reference measure, compare every
// message-conditional law against it in total variation, evaluate the
// bracket event (iota_1) and the typical-state index-count event (iota_2)
// on the realized codebook, and check the instantiated mass bound.
inline ThetaAudit theta_audit(const WiretapCode& code, const Word& s_n,
                              const AuditOptions& opts = {}) {
  const code_detail::ThetaStructures ts = code_detail::build_theta_structures(
      code.params(), code.channels, s_n, opts);
  const CodeParams& params = code.params();
  const std::size_t zn = ts.z_words.size();

  ThetaAudit audit;
  audit.s_n = s_n;
  audit.state_type = ts.q;
  audit.epsilon_n = ts.epsilon_n;
  audit.e1_ceiling = ts.e1_ceiling;
  audit.z_typical_count = ts.z_typical_count;
  audit.theta_tilde_mass = ts.theta_tilde_mass;
  audit.theta_mass = ts.theta_mass;
  audit.mass_lower_bound = 1.0 - 2.0 * ts.tail_triple - ts.epsilon_n;
  audit.mass_bound_flag = audit.theta_mass < audit.mass_lower_bound;

  Channel laws = message_conditional_laws(code, s_n, opts.budget_or_default());
  for (long long j = 0; j < code.J(); ++j) {
    double tv = 0.0;
    for (std::size_t zj = 0; zj < zn; ++zj)
      tv += std::abs(laws.prob(static_cast<int>(j), static_cast<int>(zj)) - ts.theta[zj]);
    audit.max_tv = std::max(audit.max_tv, tv);
  }
  audit.tv_bound = 4.0 * (ts.epsilon_n + ts.tail_triple);

  // iota_1: for every (j, z^n), the codebook average of the clipped channel
  // Q must fall in [(1 +- epsilon_n) Theta(z^n)].  Outside E2 the clipped
  // channel vanishes identically, so only E2 points can violate.
  for (long long j = 0; j < code.J(); ++j)
    for (std::size_t zj = 0; zj < zn; ++zj) {
      if (!ts.e2[zj]) continue;
      double avg = 0.0;
      for (long long l = 0; l < code.L(); ++l) {
        const Word& x = code.codebook.word(j, l);
        if (ts.in_e1(code.channels.eaves, s_n, x, zj))
          avg += ts.vn(code.channels.eaves, s_n, x, ts.z_words[zj]);
      }
      avg /= static_cast<double>(code.L());
      const double lo = (1.0 - ts.epsilon_n) * ts.theta[zj];
      const double hi = (1.0 + ts.epsilon_n) * ts.theta[zj];
      if (avg < lo - 1e-12 || avg > hi + 1e-12) ++audit.iota1_violations;
    }
  audit.iota1_all = audit.iota1_violations == 0;

  // iota_2: for every j, enough indices l have the state word conditionally
  // typical for X_{jl} (constant per-input law q at doubled slack).
  std::vector<double> q_rows;
  for (int x = 0; x < code.channels.a_size(); ++x)
    q_rows.insert(q_rows.end(), ts.q.vec().begin(), ts.q.vec().end());
  Channel q_const(code.channels.a_size(), code.channels.s_size(), std::move(q_rows));
  audit.iota2_threshold = (1.0 - ts.epsilon_n) * (1.0 - ts.tail_pair) *
                          static_cast<double>(code.L());
  for (long long j = 0; j < code.J(); ++j) {
    long long count = 0;
    for (long long l = 0; l < code.L(); ++l)
      if (is_cond_typical(s_n, code.codebook.word(j, l), q_const, 2.0 * params.delta))
        ++count;
    if (static_cast<double>(count) < audit.iota2_threshold - 1e-12)
      ++audit.iota2_violations;
  }
  audit.iota2_all = audit.iota2_violations == 0;

  audit.tv_bound_flag =
      audit.iota1_all && audit.iota2_all && audit.max_tv > audit.tv_bound + 1e-12;
  audit.leakage_bits = mutual_information(
      Distribution::uniform(static_cast<int>(code.J())), laws);
  return audit;
}

// Audit a list of state words (empty list: all |S|^n of them).
inline SecrecyAudit secrecy_audit(const WiretapCode& code,
                                  const std::vector<Word>& states,
                                  const AuditOptions& opts = {}) {
  std::vector<Word> all;
  const std::vector<Word>* list = &states;
  if (states.empty()) {
    const double sn = std::pow(static_cast<double>(code.channels.s_size()), code.n());
    check_budget(sn, opts.budget_or_default(), "secrecy_audit (state enumeration)");
    Word s(static_cast<std::size_t>(code.n()), 0);
    do {
      all.push_back(s);
    } while (next_word(s, code.channels.s_size()));
    list = &all;
  }
  SecrecyAudit out;
  for (const Word& s_n : *list) {
    out.slices.push_back(theta_audit(code, s_n, opts));
    const ThetaAudit& a = out.slices.back();
    if (a.leakage_bits >= out.max_leakage) {
      out.max_leakage = a.leakage_bits;
      out.worst_s_n = s_n;
    }
    out.max_tv = std::max(out.max_tv, a.max_tv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Concentration-event frequencies over resampled codebooks.
// ---------------------------------------------------------------------------

struct EventFrequencyReport {
  long long trials = 0;
  long long iota1_events = 0;      // (trial, j, z^n in E2) triples tested
  long long iota1_violations = 0;
  long long iota2_events = 0;      // (trial, j) pairs tested
  long long iota2_violations = 0;
  double freq_iota1_c = 0.0;
  double freq_iota2_c = 0.0;
  double bound_iota1 = 1.0;  // per-event concentration prediction
  double bound_iota2 = 1.0;
  double epsilon_n = 0.0;
  double iota2_threshold = 0.0;
};

// Resample codebooks from the same parameters and measure how often the
// bracket event and the index-count event fail, against the per-event
// concentration predictions (reported as 1 when the prediction's
// preconditions fail, and 0 when the event cannot fail at all).
inline EventFrequencyReport event_frequencies(const CodeParams& params,
                                              const CavwcSpec& channels,
                                              const Word& s_n, int trials,
                                              std::uint64_t seed,
                                              const AuditOptions& opts = {}) {
  if (trials < 1) throw std::invalid_argument("event_frequencies: trials < 1");
  AuditOptions exact = opts;
  exact.monte_carlo = false;
  const code_detail::ThetaStructures ts =
      code_detail::build_theta_structures(params, channels, s_n, exact);
  const std::size_t zn = ts.z_words.size();
  const double L = static_cast<double>(params.L);

  EventFrequencyReport rep;
  rep.trials = trials;
  rep.epsilon_n = ts.epsilon_n;
  rep.iota2_threshold = (1.0 - ts.epsilon_n) * (1.0 - ts.tail_pair) * L;

  std::vector<double> q_rows;
  for (int x = 0; x < channels.a_size(); ++x)
    q_rows.insert(q_rows.end(), ts.q.vec().begin(), ts.q.vec().end());
  Channel q_const(channels.a_size(), channels.s_size(), std::move(q_rows));

  for (int t = 0; t < trials; ++t) {
    Codebook cb = sample_codebook(params, derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (long long j = 0; j < params.J; ++j) {
      for (std::size_t zj = 0; zj < zn; ++zj) {
        if (!ts.e2[zj]) continue;
        double avg = 0.0;
        for (long long l = 0; l < params.L; ++l) {
          const Word& x = cb.word(j, l);
          if (ts.in_e1(channels.eaves, s_n, x, zj))
            avg += ts.vn(channels.eaves, s_n, x, ts.z_words[zj]);
        }
        avg /= L;
        ++rep.iota1_events;
        const double lo = (1.0 - ts.epsilon_n) * ts.theta[zj];
        const double hi = (1.0 + ts.epsilon_n) * ts.theta[zj];
        if (avg < lo - 1e-12 || avg > hi + 1e-12) ++rep.iota1_violations;
      }
      long long count = 0;
      for (long long l = 0; l < params.L; ++l)
        if (is_cond_typical(s_n, cb.word(j, l), q_const, 2.0 * params.delta))
          ++count;
      ++rep.iota2_events;
      if (static_cast<double>(count) < rep.iota2_threshold - 1e-12)
        ++rep.iota2_violations;
    }
  }
  if (rep.iota1_events > 0)
    rep.freq_iota1_c = static_cast<double>(rep.iota1_violations) /
                       static_cast<double>(rep.iota1_events);
  if (rep.iota2_events > 0)
    rep.freq_iota2_c = static_cast<double>(rep.iota2_violations) /
                       static_cast<double>(rep.iota2_events);

  // Predictions.  iota_1: average of L i.i.d. values in [0, b] with mean
  // Theta(z^n); the weakest point is the smallest retained mass.
  double theta_min = std::numeric_limits<double>::infinity();
  for (std::size_t zj = 0; zj < zn; ++zj)
    if (ts.e2[zj]) theta_min = std::min(theta_min, ts.theta[zj]);
  const double b = std::min(ts.e1_ceiling, 1.0);
  if (!std::isfinite(theta_min)) {
    rep.bound_iota1 = 0.0;  // E2 empty: no bracket event can fail
  } else if (ts.epsilon_n < 0.5 && theta_min > 0.0 && theta_min <= b + 1e-15) {
    rep.bound_iota1 = chernoff_bound(L, theta_min, b, ts.epsilon_n);
  }
  const double nu2 = 1.0 - ts.tail_pair;
  if (rep.iota2_threshold <= 0.0) {
    rep.bound_iota2 = 0.0;  // threshold vacuous: the count event cannot fail
  } else if (ts.epsilon_n < 0.5 && nu2 > 0.0) {
    rep.bound_iota2 = chernoff_bound(L, nu2, 1.0, ts.epsilon_n);
  }
  return rep;
}

}  // namespace avwc
