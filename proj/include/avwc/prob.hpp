#pragma once

// Finite probability spaces: distributions, discrete memoryless channels,
// joint laws, Shannon quantities, delta-typicality (strict-inequality
// definition with a hard support condition), and the explicit concentration
// bounds used by the code-construction audits.
//
// Conventions used throughout the library:
//   * all logarithms / entropies are base 2 (bits), exp(x) means 2^x,
//   * 0 * log 0 = 0,
//   * total variation is the UNHALVED L1 distance (range [0, 2]),
//   * stochasticity is validated to within 1e-9 per row.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/sequence.hpp"

namespace avwc {

inline constexpr double kProbTol = 1e-9;  // simplex-membership validation slack
inline constexpr double kLog2E = 1.4426950408889634074;  // log2(e)

inline double log2_safe(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

// x * log2(x) with the 0 log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// ---------------------------------------------------------------------------
// Distribution: a probability vector over a finite alphabet.
// ---------------------------------------------------------------------------
class Distribution {
 public:
  Distribution() = default;

  explicit Distribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("Distribution: empty support");
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0))
        throw std::invalid_argument("Distribution: negative or NaN entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTol)
      throw std::invalid_argument("Distribution: entries sum to " +
                                  std::to_string(sum) + ", not 1");
  }

  static Distribution uniform(int n) {
    if (n <= 0) throw std::invalid_argument("Distribution::uniform: n <= 0");
    return Distribution(std::vector<double>(static_cast<std::size_t>(n),
                                            1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(int n, int i) {
    if (n <= 0 || i < 0 || i >= n)
      throw std::invalid_argument("Distribution::point_mass: bad index");
    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    p[static_cast<std::size_t>(i)] = 1.0;
    return Distribution(std::move(p));
  }

  // Normalize arbitrary non-negative weights.
  static Distribution normalized(std::vector<double> w) {
    double sum = 0.0;
    for (double v : w) {
      if (!(v >= 0.0))
        throw std::invalid_argument("Distribution::normalized: negative entry");
      sum += v;
    }
    if (!(sum > 0.0))
      throw std::invalid_argument("Distribution::normalized: zero mass");
    for (double& v : w) v /= sum;
    return Distribution(std::move(w));
  }

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& vec() const { return p_; }
  const double* data() const { return p_.data(); }

 private:
  std::vector<double> p_;
};

// ---------------------------------------------------------------------------
// Channel: a row-stochastic |A| x |B| matrix, rows indexed by the input.
// ---------------------------------------------------------------------------
class Channel {
 public:
  Channel() = default;

  Channel(int in_size, int out_size, std::vector<double> row_major)
      : in_(in_size), out_(out_size), w_(std::move(row_major)) {
    validate();
  }

  explicit Channel(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("Channel: no rows");
    in_ = static_cast<int>(rows.size());
    out_ = static_cast<int>(rows[0].size());
    w_.reserve(static_cast<std::size_t>(in_) * static_cast<std::size_t>(out_));
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != out_)
        throw std::invalid_argument("Channel: ragged rows");
      w_.insert(w_.end(), r.begin(), r.end());
    }
    validate();
  }

  static Channel identity(int n) {
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      w[static_cast<std::size_t>(i) * n + i] = 1.0;
    return Channel(n, n, std::move(w));
  }

  // Every input mapped to the same output law (a useless channel).
  static Channel constant_output(int in_size, const Distribution& out) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(in_size) * out.size());
    for (int x = 0; x < in_size; ++x)
      w.insert(w.end(), out.vec().begin(), out.vec().end());
    return Channel(in_size, out.size(), std::move(w));
  }

  // Binary symmetric channel with crossover probability eps.
  static Channel bsc(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
      throw std::invalid_argument("Channel::bsc: eps outside [0,1]");
    return Channel(2, 2, {1.0 - eps, eps, eps, 1.0 - eps});
  }

  int in_size() const { return in_; }
  int out_size() const { return out_; }

  double prob(int x, int y) const {
    return w_[static_cast<std::size_t>(x) * out_ + y];
  }
  const double* row(int x) const {
    return w_.data() + static_cast<std::size_t>(x) * out_;
  }
  Distribution row_dist(int x) const {
    return Distribution(std::vector<double>(row(x), row(x) + out_));
  }
  const std::vector<double>& raw() const { return w_; }

  // Output law under input distribution p.
  Distribution push_forward(const Distribution& p) const {
    if (p.size() != in_)
      throw std::invalid_argument("Channel::push_forward: size mismatch");
    std::vector<double> q(static_cast<std::size_t>(out_), 0.0);
    for (int x = 0; x < in_; ++x) {
      const double px = p[x];
      if (px == 0.0) continue;
      const double* r = row(x);
      for (int y = 0; y < out_; ++y) q[static_cast<std::size_t>(y)] += px * r[y];
    }
    // Guard tiny negative round-off and renormalize drift within tolerance.
    for (double& v : q) v = std::max(v, 0.0);
    return Distribution(std::move(q));
  }

 private:
  void validate() const {
    if (in_ <= 0 || out_ <= 0)
      throw std::invalid_argument("Channel: non-positive alphabet size");
    if (w_.size() != static_cast<std::size_t>(in_) * static_cast<std::size_t>(out_))
      throw std::invalid_argument("Channel: entry count mismatch");
    for (int x = 0; x < in_; ++x) {
      double sum = 0.0;
      for (int y = 0; y < out_; ++y) {
        double v = prob(x, y);
        if (!(v >= 0.0))
          throw std::invalid_argument("Channel: negative or NaN entry in row " +
                                      std::to_string(x));
        sum += v;
      }
      if (std::abs(sum - 1.0) > kProbTol)
        throw std::invalid_argument("Channel: row " + std::to_string(x) +
                                    " sums to " + std::to_string(sum));
    }
  }

  int in_ = 0;
  int out_ = 0;
  std::vector<double> w_;  // row-major
};

// first W: A->B, then T: B->C; result is the composed channel A->C.
inline Channel chain(const Channel& w, const Channel& t) {
  if (w.out_size() != t.in_size())
    throw std::invalid_argument("chain: inner alphabet mismatch");
  const int a = w.in_size(), b = w.out_size(), c = t.out_size();
  std::vector<double> out(static_cast<std::size_t>(a) * c, 0.0);
  for (int x = 0; x < a; ++x) {
    const double* wr = w.row(x);
    for (int y = 0; y < b; ++y) {
      const double wxy = wr[y];
      if (wxy == 0.0) continue;
      const double* tr = t.row(y);
      for (int z = 0; z < c; ++z)
        out[static_cast<std::size_t>(x) * c + z] += wxy * tr[z];
    }
  }
  for (double& v : out) v = std::max(v, 0.0);
  return Channel(a, c, std::move(out));
}

// ---------------------------------------------------------------------------
// JointDistribution over a product alphabet A x B, row-major.
// ---------------------------------------------------------------------------
class JointDistribution {
 public:
  JointDistribution(int nx, int ny, std::vector<double> table)
      : nx_(nx), ny_(ny), t_(std::move(table)) {
    if (nx_ <= 0 || ny_ <= 0 ||
        t_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_))
      throw std::invalid_argument("JointDistribution: dimension mismatch");
    double sum = 0.0;
    for (double v : t_) {
      if (!(v >= 0.0))
        throw std::invalid_argument("JointDistribution: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTol)
      throw std::invalid_argument("JointDistribution: mass " + std::to_string(sum));
  }

  static JointDistribution from_input_channel(const Distribution& p,
                                              const Channel& ch) {
    if (p.size() != ch.in_size())
      throw std::invalid_argument("JointDistribution: input size mismatch");
    std::vector<double> t(static_cast<std::size_t>(p.size()) * ch.out_size());
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < ch.out_size(); ++y)
        t[static_cast<std::size_t>(x) * ch.out_size() + y] = p[x] * ch.prob(x, y);
    return JointDistribution(p.size(), ch.out_size(), std::move(t));
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double prob(int x, int y) const {
    return t_[static_cast<std::size_t>(x) * ny_ + y];
  }
  const std::vector<double>& raw() const { return t_; }

  Distribution marginal_x() const {
    std::vector<double> m(static_cast<std::size_t>(nx_), 0.0);
    for (int x = 0; x < nx_; ++x)
      for (int y = 0; y < ny_; ++y) m[static_cast<std::size_t>(x)] += prob(x, y);
    return Distribution(std::move(m));
  }
  Distribution marginal_y() const {
    std::vector<double> m(static_cast<std::size_t>(ny_), 0.0);
    for (int x = 0; x < nx_; ++x)
      for (int y = 0; y < ny_; ++y) m[static_cast<std::size_t>(y)] += prob(x, y);
    return Distribution(std::move(m));
  }

 private:
  int nx_, ny_;
  std::vector<double> t_;
};

// ---------------------------------------------------------------------------
// Shannon quantities (bits).
// ---------------------------------------------------------------------------
inline double entropy_raw(const double* p, int n) {
  double h = 0.0;
  for (int i = 0; i < n; ++i) h -= xlog2x(p[i]);
  return std::max(h, 0.0);
}

inline double entropy(const Distribution& p) { return entropy_raw(p.data(), p.size()); }

inline double entropy(const std::vector<double>& p) {
  return entropy_raw(p.data(), static_cast<int>(p.size()));
}

// H(Y|X) = sum_x p(x) H(W(.|x)).
inline double conditional_entropy(const Distribution& p, const Channel& ch) {
  if (p.size() != ch.in_size())
    throw std::invalid_argument("conditional_entropy: size mismatch");
  double h = 0.0;
  for (int x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) h += p[x] * entropy_raw(ch.row(x), ch.out_size());
  return h;
}

// I(X;Y) for X ~ p through ch, computed as H(output) - H(output | input).
inline double mutual_information(const Distribution& p, const Channel& ch) {
  Distribution q = ch.push_forward(p);
  double mi = entropy(q) - conditional_entropy(p, ch);
  return std::max(mi, 0.0);
}

// I(X;Y) from a joint table via H(X) + H(Y) - H(X,Y).
inline double mutual_information(const JointDistribution& j) {
  double hxy = entropy_raw(j.raw().data(), static_cast<int>(j.raw().size()));
  double mi = entropy(j.marginal_x()) + entropy(j.marginal_y()) - hxy;
  return std::max(mi, 0.0);
}

// Unhalved total variation between two non-negative measures of equal size.
inline double tv_distance(const std::vector<double>& mu,
                          const std::vector<double>& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("tv_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0.0) || !(nu[i] >= 0.0))
      throw std::invalid_argument("tv_distance: negative entry");
    d += std::abs(mu[i] - nu[i]);
  }
  return d;
}

inline double tv_distance(const Distribution& mu, const Distribution& nu) {
  return tv_distance(mu.vec(), nu.vec());
}

// ---------------------------------------------------------------------------
// Types and delta-typicality.
// ---------------------------------------------------------------------------
struct TypicalityParams {
  int n;
  double delta;
  TypicalityParams(int n_, double delta_) : n(n_), delta(delta_) {
    if (n < 1) throw std::invalid_argument("TypicalityParams: n < 1");
    if (!(delta > 0.0)) throw std::invalid_argument("TypicalityParams: delta <= 0");
  }
};

inline std::vector<int> letter_counts(const Word& x, int alphabet) {
  std::vector<int> c(static_cast<std::size_t>(alphabet), 0);
  for (int a : x) {
    if (a < 0 || a >= alphabet)
      throw std::invalid_argument("letter_counts: letter out of range");
    ++c[static_cast<std::size_t>(a)];
  }
  return c;
}

// Empirical distribution of a non-empty word.
inline Distribution type_of(const Word& x, int alphabet) {
  if (x.empty()) throw std::invalid_argument("type_of: empty word");
  std::vector<int> c = letter_counts(x, alphabet);
  std::vector<double> p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    p[i] = static_cast<double>(c[i]) / static_cast<double>(x.size());
  return Distribution(std::move(p));
}

// x is delta-typical for p iff every letter frequency is strictly within
// delta of p AND no letter outside supp(p) occurs.
inline bool is_typical(const Word& x, const Distribution& p, double delta) {
  if (x.empty()) throw std::invalid_argument("is_typical: empty word");
  if (!(delta > 0.0)) throw std::invalid_argument("is_typical: delta <= 0");
  std::vector<int> c = letter_counts(x, p.size());
  const double n = static_cast<double>(x.size());
  for (int a = 0; a < p.size(); ++a) {
    // Compare counts rather than frequencies: |N_a - n p_a| < n delta has the
    // same solutions but avoids a rounded division on the boundary.
    const double na = static_cast<double>(c[static_cast<std::size_t>(a)]);
    if (!(std::abs(na - n * p[a]) < n * delta)) return false;
    if (p[a] == 0.0 && c[static_cast<std::size_t>(a)] != 0) return false;
  }
  return true;
}

inline bool is_typical(const Word& x, const Distribution& p,
                       const TypicalityParams& params) {
  if (static_cast<int>(x.size()) != params.n)
    throw std::invalid_argument("is_typical: word length != params.n");
  return is_typical(x, p, params.delta);
}

// y is conditionally delta-typical for channel ch given x iff every joint
// count satisfies |N(a,b) - ch(b|a) N(a)| < n delta and N(a,b) = 0
// whenever ch(b|a) = 0.
inline bool is_cond_typical(const Word& y, const Word& x, const Channel& ch,
                            double delta) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("is_cond_typical: bad word lengths");
  if (!(delta > 0.0)) throw std::invalid_argument("is_cond_typical: delta <= 0");
  const int a_sz = ch.in_size(), b_sz = ch.out_size();
  std::vector<int> joint(static_cast<std::size_t>(a_sz) * b_sz, 0);
  std::vector<int> nx(static_cast<std::size_t>(a_sz), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= a_sz || y[i] < 0 || y[i] >= b_sz)
      throw std::invalid_argument("is_cond_typical: letter out of range");
    ++joint[static_cast<std::size_t>(x[i]) * b_sz + y[i]];
    ++nx[static_cast<std::size_t>(x[i])];
  }
  const double n = static_cast<double>(x.size());
  for (int a = 0; a < a_sz; ++a) {
    for (int b = 0; b < b_sz; ++b) {
      const int nab = joint[static_cast<std::size_t>(a) * b_sz + b];
      const double w = ch.prob(a, b);
      if (w == 0.0 && nab != 0) return false;
      const double lhs = static_cast<double>(nab) -
                         w * static_cast<double>(nx[static_cast<std::size_t>(a)]);
      if (!(std::abs(lhs) < n * delta)) return false;
    }
  }
  return true;
}

inline bool is_cond_typical(const Word& y, const Word& x, const Channel& ch,
                            const TypicalityParams& params) {
  if (static_cast<int>(x.size()) != params.n)
    throw std::invalid_argument("is_cond_typical: word length != params.n");
  return is_cond_typical(y, x, ch, params.delta);
}

// ---------------------------------------------------------------------------
// Concentration / counting bounds.
// ---------------------------------------------------------------------------

// P(X^n not delta-typical) <= min(1, 2|A| exp(-2 n delta^2)) under i.i.d.
// sampling (per-letter Hoeffding + union over the alphabet).  Written
// base-2 as 2|A| * 2^(-2 n delta^2 log2 e).  n = 0 returns the vacuous 1.
inline double typicality_tail_bound(int n, double delta, int alphabet_size) {
  if (n < 0 || alphabet_size < 1 || !(delta > 0.0))
    throw std::invalid_argument("typicality_tail_bound: bad arguments");
  if (n == 0) return 1.0;
  const double exponent = -2.0 * static_cast<double>(n) * delta * delta * kLog2E;
  const double b = 2.0 * static_cast<double>(alphabet_size) * std::exp2(exponent);
  return std::min(1.0, b);
}

inline double typicality_tail_bound(const TypicalityParams& params,
                                    int alphabet_size) {
  return typicality_tail_bound(params.n, params.delta, alphabet_size);
}

// Number of types of length-n words over an s-letter alphabet is at most
// (n+1)^s; returned as a double so large (n, s) cannot overflow.
inline double type_count_bound(int n, int state_alphabet_size) {
  if (n < 0 || state_alphabet_size < 1)
    throw std::invalid_argument("type_count_bound: bad arguments");
  return std::pow(static_cast<double>(n) + 1.0,
                  static_cast<double>(state_alphabet_size));
}

// Exact number of types: C(n + s - 1, s - 1).
inline std::uint64_t type_count_exact(int n, int s) {
  if (n < 0 || s < 1) throw std::invalid_argument("type_count_exact: bad arguments");
  std::vector<int> counts = {n, s - 1};
  return multinomial(counts);  // C(n + s - 1, s - 1)
}

// Two-sided relative concentration for an i.i.d. average of L variables in
// [0, b] with mean nu:  P{ (1/L) sum Z_l outside [(1 +- eps) nu] }
//   <= 2 exp(-L eps^2 nu / (3b))  =  2 * 2^(-L eps^2 nu log2(e) / (3b)),
// clamped to 1.  Requires 0 < eps < 1/2 and 0 < nu <= b.
inline double chernoff_bound(double L, double nu, double b, double eps) {
  if (!(L >= 1.0)) throw std::invalid_argument("chernoff_bound: L < 1");
  if (!(b > 0.0) || !(nu > 0.0) || !(nu <= b + 1e-15))
    throw std::invalid_argument("chernoff_bound: need 0 < nu <= b");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("chernoff_bound: need 0 < eps < 1/2");
  const double bound = 2.0 * std::exp(-L * eps * eps * nu / (3.0 * b));
  return std::min(1.0, bound);
}

// Entropy continuity: |H(p) - H(q)| <= theta * log2(m / theta) whenever
// ||p - q||_1 <= theta <= 1/2 over an m-letter alphabet; for theta > 1/2
// fall back to the trivial log2(m).
inline double entropy_continuity_modulus(double theta, double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("entropy_continuity_modulus: m < 1");
  if (theta <= 0.0) return 0.0;
  if (theta > 0.5) return std::log2(m);
  return theta * std::log2(m / theta);
}

// Per-sequence conditional log-probability modulus: for words whose joint
// type deviates from p(a) W(b|a) by at most `slack` entrywise,
// |(1/n) log2 W^n(y|x) + H(Y|X)| <= slack * support_pairs * log2(1 / w_min),
// where w_min is the smallest strictly positive channel entry involved.
inline double conditional_logprob_modulus(double slack, int support_pairs,
                                          double w_min) {
  if (slack < 0.0 || support_pairs < 0 || !(w_min > 0.0 && w_min <= 1.0))
    throw std::invalid_argument("conditional_logprob_modulus: bad arguments");
  if (w_min == 1.0) return 0.0;
  return slack * static_cast<double>(support_pairs) * std::log2(1.0 / w_min);
}

// If every message-conditional eavesdropper law is within (unhalved) total
// variation t of one common measure, the message leakage over an |C|^n output
// alphabet obeys I(M;Z) <= theta * log2(|C|^n / theta) with theta = 2t
// (entropy continuity applied to H(Z) - H(Z|M=j)); trivial bound otherwise.
inline double mi_tv_bound(double t, int n, int c_size) {
  if (t < 0.0 || n < 1 || c_size < 1)
    throw std::invalid_argument("mi_tv_bound: bad arguments");
  const double total = static_cast<double>(n) * std::log2(static_cast<double>(c_size));
  const double theta = 2.0 * t;
  if (theta == 0.0) return 0.0;
  if (theta > 0.5) return total;
  return theta * (total - std::log2(theta));
}

// ---------------------------------------------------------------------------
// Reproducible randomness.  All stochastic operations take a 64-bit seed and
// draw through this wrapper only (std::random distributions are
// implementation-defined, so sampling is done by hand).
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t u64() { return g_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(g_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by rejection.
  int index(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::index: n <= 0");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
      v = g_();
    } while (v >= limit);
    return static_cast<int>(v % un);
  }

  // Sample a letter from a distribution (CDF walk).
  int sample(const Distribution& p) {
    double u = unit();
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return i;
    }
    return p.size() - 1;  // round-off fallthrough
  }

  // Flat Dirichlet sample (uniform over the simplex) via exponentials.
  Distribution simplex_point(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& v : w) v = -std::log(1.0 - unit());
    return Distribution::normalized(std::move(w));
  }

  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

// Stable per-task seed derivation (splitmix64 finalizer over root + index).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace avwc
