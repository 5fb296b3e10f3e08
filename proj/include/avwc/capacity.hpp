#pragma once

// Secrecy-rate evaluation for state-varying wiretap channel families.
//
// The central quantity is, for a blocklength-k input structure
// (U, P_U, P_{X^k|U}),
//
//     F(structure) = min_{q in P(S)} I(U; Y_q^k)  -  max_{s^k} I(U; Z_{s^k}^k)
//
// where Y_q^k flows through the k-fold product of the state-mixed legit
// channel W_q and Z_{s^k}^k through the per-letter varying eavesdropper
// product.  evaluate_RSk maximizes F over input structures (multi-start
// projected ascent; the inner min is solved exactly in the convex k=1 case
// and heuristically for k >= 2), reporting bits per letter clamped at 0.
// evaluate_RS_dagger is the k=1, U=X variant over a finite compound legit
// list; evaluate_single_letter_degraded is the closed-form-regime evaluator
// for product-state families with a degraded eavesdropper.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/channel.hpp"
#include "avwc/prob.hpp"
#include "avwc/sequence.hpp"

namespace avwc {

// ---------------------------------------------------------------------------
// Types.
// ---------------------------------------------------------------------------

// Auxiliary-variable input structure at blocklength k: U ~ p_u feeds the
// stochastic map p_x_given_u : U -> A^k.  |U| is capped at |A|^k.
struct InputStructure {
  int k = 1;
  Distribution p_u;
  Channel p_x_given_u;

  InputStructure() = default;
  InputStructure(int k_, Distribution pu, Channel pxu)
      : k(k_), p_u(std::move(pu)), p_x_given_u(std::move(pxu)) {
    if (k < 1) throw std::invalid_argument("InputStructure: k < 1");
    if (p_u.size() != p_x_given_u.in_size())
      throw std::invalid_argument("InputStructure: |U| mismatch");
  }

  int u_size() const { return p_u.size(); }

  void validate_against(int a_size) const {
    const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(a_size),
                                         static_cast<unsigned>(k));
    if (static_cast<std::uint64_t>(p_x_given_u.out_size()) != ak)
      throw std::invalid_argument("InputStructure: map must target A^k");
    if (static_cast<std::uint64_t>(p_u.size()) > ak)
      throw std::invalid_argument("InputStructure: |U| exceeds |A|^k cap");
  }
};

struct CapacityDiagnostics {
  int restarts = 0;
  long long ascent_steps = 0;   // accepted ascent steps, all restarts
  bool heuristic_min = false;   // inner compound min not certified global
  int best_restart = -1;
  double raw_bits = 0.0;        // unclamped block objective at the optimum
  int worst_r = -1;             // compound-list minimizer (dagger only)
};

struct CapacityEstimate {
  double value = 0.0;  // bits per letter, clamped at 0
  int k = 1;
  InputStructure argmax;
  std::optional<Distribution> worst_q;  // legit-side jamming mixture
  Word worst_s_k;                       // eavesdropper state word, length k
  CapacityDiagnostics diag;
};

struct EvalOptions {
  int restarts = 16;
  std::uint64_t seed = 1;
  double inner_tol = 1e-7;   // convex inner-minimization tolerance
  int max_iters = 300;       // outer ascent iterations per restart
  int u_cap = 0;             // 0 -> |A|^k
  double budget = -1.0;      // <0 -> default_budget()
  int dense_q_steps = 128;   // |S|=2 dense-grid cross-check for k >= 2

  double budget_or_default() const { return budget < 0 ? default_budget() : budget; }
};

struct CompoundMin {
  Distribution q;
  double bits = 0.0;
  bool heuristic = false;
};

// ---------------------------------------------------------------------------
// Internals.
// ---------------------------------------------------------------------------
namespace opt_detail {

inline std::vector<double> proj_simplex(std::vector<double> v) {
  // Euclidean projection onto the probability simplex (sort-based).
  const int n = static_cast<int>(v.size());
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    css += u[static_cast<std::size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(x - theta, 0.0);
  // Exact renormalization guard against round-off.
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0)
    for (double& x : v) x /= s;
  else
    v.assign(v.size(), 1.0 / static_cast<double>(n));
  return v;
}

// Mutual-information formula extended smoothly off the simplex; used only to
// take finite differences of the ascent surrogate.  rows is m x out.
inline double mi_formula(const std::vector<double>& pu,
                         const std::vector<double>& rows, int m, int out) {
  double mi = 0.0;
  std::vector<double> bar(static_cast<std::size_t>(out), 0.0);
  for (int u = 0; u < m; ++u) {
    const double w = pu[static_cast<std::size_t>(u)];
    for (int y = 0; y < out; ++y)
      bar[static_cast<std::size_t>(y)] += w * rows[static_cast<std::size_t>(u) * out + y];
  }
  for (int u = 0; u < m; ++u) {
    const double w = pu[static_cast<std::size_t>(u)];
    if (w == 0.0) continue;
    for (int y = 0; y < out; ++y) {
      const double t = rows[static_cast<std::size_t>(u) * out + y];
      if (t <= 0.0) continue;
      const double b = std::max(bar[static_cast<std::size_t>(y)], 1e-300);
      mi += w * t * std::log2(t / b);
    }
  }
  return mi;
}

// (P rows m x ak) o (ch ak x out) -> raw m x out, no validation.
inline std::vector<double> chain_raw(const std::vector<double>& p_rows, int m,
                                     int ak, const Channel& ch) {
  const int out = ch.out_size();
  std::vector<double> rows(static_cast<std::size_t>(m) * out, 0.0);
  for (int u = 0; u < m; ++u)
    for (int x = 0; x < ak; ++x) {
      const double pxu = p_rows[static_cast<std::size_t>(u) * ak + x];
      if (pxu == 0.0) continue;
      const double* r = ch.row(x);
      for (int y = 0; y < out; ++y)
        rows[static_cast<std::size_t>(u) * out + y] += pxu * r[y];
    }
  return rows;
}

// Precomputed k-letter view of an AVWC used across one evaluation call.
struct KContext {
  const AvwcSpec* spec = nullptr;
  int k = 1;
  int ak = 0;
  std::vector<Channel> eaves_k;  // one |A|^k x |C|^k channel per state word
  std::vector<Word> eaves_words;
};

inline KContext build_context(const AvwcSpec& spec, int k, double budget) {
  KContext ctx;
  ctx.spec = &spec;
  ctx.k = k;
  const std::uint64_t ak = pow_checked(static_cast<std::uint64_t>(spec.a_size()),
                                       static_cast<unsigned>(k));
  const std::uint64_t sk = pow_checked(static_cast<std::uint64_t>(spec.s_size()),
                                       static_cast<unsigned>(k));
  const std::uint64_t ck = pow_checked(static_cast<std::uint64_t>(spec.c_size()),
                                       static_cast<unsigned>(k));
  check_budget(static_cast<double>(sk) * static_cast<double>(ak) *
                   static_cast<double>(ck),
               budget, "capacity evaluation (eavesdropper state words)");
  ctx.ak = static_cast<int>(ak);
  Word s(static_cast<std::size_t>(k), 0);
  do {
    ctx.eaves_words.push_back(s);
    ctx.eaves_k.push_back(sequence_product_channel(spec.eaves, s, budget));
  } while (next_word(s, spec.s_size()));
  return ctx;
}

// I(U; Y_q^k) for the given structure.
inline double legit_mi(const KContext& ctx, const InputStructure& st,
                       const Distribution& q) {
  Channel wq = mix_channel(ctx.spec->legit, q);
  Channel wqk = ctx.k == 1 ? wq : product_channel(wq, ctx.k);
  return mutual_information(st.p_u, chain(st.p_x_given_u, wqk));
}

struct EavesMax {
  int index = 0;
  double bits = 0.0;
};

inline EavesMax eaves_max(const KContext& ctx, const InputStructure& st) {
  EavesMax best;
  best.bits = -1.0;
  for (std::size_t i = 0; i < ctx.eaves_k.size(); ++i) {
    const double mi =
        mutual_information(st.p_u, chain(st.p_x_given_u, ctx.eaves_k[i]));
    if (mi > best.bits) {
      best.bits = mi;
      best.index = static_cast<int>(i);
    }
  }
  return best;
}

// Exact convex minimization of I(p_u, sum_s q_s C_s) over q in P(S) by
// projected gradient descent with an analytic gradient and Armijo line
// search.  C_s are the per-state channels already chained through the input
// structure (affine dependence on q, so the objective is convex).
inline std::pair<Distribution, double> min_mixture_mi(
    const std::vector<Channel>& c_s, const Distribution& pu, double tol,
    const std::vector<double>* warm = nullptr) {
  const int ns = static_cast<int>(c_s.size());
  const int m = pu.size();
  const int out = c_s[0].out_size();

  auto value_at = [&](const std::vector<double>& q) {
    std::vector<double> rows(static_cast<std::size_t>(m) * out, 0.0);
    for (int s = 0; s < ns; ++s) {
      const double qs = q[static_cast<std::size_t>(s)];
      if (qs == 0.0) continue;
      const auto& raw = c_s[static_cast<std::size_t>(s)].raw();
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] += qs * raw[i];
    }
    return mi_formula(pu.vec(), rows, m, out);
  };
  auto gradient_at = [&](const std::vector<double>& q) {
    std::vector<double> rows(static_cast<std::size_t>(m) * out, 0.0);
    for (int s = 0; s < ns; ++s) {
      const double qs = q[static_cast<std::size_t>(s)];
      if (qs == 0.0) continue;
      const auto& raw = c_s[static_cast<std::size_t>(s)].raw();
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] += qs * raw[i];
    }
    std::vector<double> bar(static_cast<std::size_t>(out), 0.0);
    for (int u = 0; u < m; ++u)
      for (int y = 0; y < out; ++y)
        bar[static_cast<std::size_t>(y)] +=
            pu[u] * rows[static_cast<std::size_t>(u) * out + y];
    std::vector<double> g(static_cast<std::size_t>(ns), 0.0);
    for (int s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (int u = 0; u < m; ++u) {
        if (pu[u] == 0.0) continue;
        for (int y = 0; y < out; ++y) {
          const double csy = c_s[static_cast<std::size_t>(s)].prob(u, y);
          if (csy == 0.0) continue;
          const double t = std::max(rows[static_cast<std::size_t>(u) * out + y], 1e-300);
          const double b = std::max(bar[static_cast<std::size_t>(y)], 1e-300);
          acc += pu[u] * csy * std::log2(t / b);
        }
      }
      g[static_cast<std::size_t>(s)] = acc;
    }
    return g;
  };

  std::vector<double> q = warm ? *warm
                               : std::vector<double>(static_cast<std::size_t>(ns),
                                                     1.0 / static_cast<double>(ns));
  q = proj_simplex(std::move(q));
  double val = value_at(q);
  double step = 0.5;
  for (int iter = 0; iter < 2000; ++iter) {
    std::vector<double> g = gradient_at(q);
    bool accepted = false;
    double t = step;
    for (int ls = 0; ls < 40 && !accepted; ++ls) {
      std::vector<double> cand(static_cast<std::size_t>(ns));
      for (int s = 0; s < ns; ++s)
        cand[static_cast<std::size_t>(s)] =
            q[static_cast<std::size_t>(s)] - t * g[static_cast<std::size_t>(s)];
      cand = proj_simplex(std::move(cand));
      double move = 0.0;
      for (int s = 0; s < ns; ++s)
        move += std::abs(cand[static_cast<std::size_t>(s)] - q[static_cast<std::size_t>(s)]);
      if (move < 1e-14) break;
      const double cv = value_at(cand);
      if (cv < val - 1e-15) {
        q = std::move(cand);
        val = cv;
        accepted = true;
        step = std::min(t * 2.0, 4.0);
      } else {
        t *= 0.5;
      }
    }
    if (!accepted) {
      if (step < tol * 1e-4) break;
      step *= 0.25;
      if (step < 1e-12) break;
    }
  }
  return {Distribution(proj_simplex(q)), std::max(val, 0.0)};
}

// Derivative-free pairwise mass-transfer descent for the non-convex k >= 2
// compound minimization.  g is evaluated on simplex points only.
inline std::pair<std::vector<double>, double> mass_transfer_min(
    const std::function<double(const std::vector<double>&)>& g,
    std::vector<double> q, double min_step = 1e-9) {
  const int n = static_cast<int>(q.size());
  double val = g(q);
  double step = 0.25;
  while (step >= min_step) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double amount = std::min(step, q[static_cast<std::size_t>(j)]);
        if (amount <= 0.0) continue;
        std::vector<double> cand = q;
        cand[static_cast<std::size_t>(j)] -= amount;
        cand[static_cast<std::size_t>(i)] += amount;
        const double cv = g(cand);
        if (cv < val - 1e-15) {
          q = std::move(cand);
          val = cv;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {q, val};
}

inline CompoundMin min_over_compound_impl(const KContext& ctx,
                                          const InputStructure& st,
                                          const EvalOptions& opts,
                                          const std::vector<double>* warm,
                                          bool thorough) {
  const AvwcSpec& spec = *ctx.spec;
  const int ns = spec.s_size();
  CompoundMin out;
  if (ns == 1) {
    out.q = Distribution::point_mass(1, 0);
    out.bits = legit_mi(ctx, st, out.q);
    return out;
  }
  if (ctx.k == 1) {
    // Convex case: chain each state's channel through the structure once.
    std::vector<Channel> c_s;
    c_s.reserve(static_cast<std::size_t>(ns));
    for (int s = 0; s < ns; ++s)
      c_s.push_back(chain(st.p_x_given_u, spec.legit[static_cast<std::size_t>(s)]));
    auto [q, bits] = min_mixture_mi(c_s, st.p_u, opts.inner_tol, warm);
    out.q = std::move(q);
    out.bits = bits;
    return out;
  }

  // k >= 2: the product channel is not affine in q; multi-start descent.
  out.heuristic = true;
  auto g = [&](const std::vector<double>& q) {
    return legit_mi(ctx, st, Distribution(proj_simplex(q)));
  };
  std::vector<std::vector<double>> starts;
  if (warm) starts.push_back(*warm);
  starts.push_back(std::vector<double>(static_cast<std::size_t>(ns),
                                       1.0 / static_cast<double>(ns)));
  if (thorough) {
    for (int s = 0; s < ns; ++s) {
      std::vector<double> v(static_cast<std::size_t>(ns), 0.0);
      v[static_cast<std::size_t>(s)] = 1.0;
      starts.push_back(std::move(v));
    }
    if (ns == 2) {
      // Dense 1-D scan, then refine from the best grid point.
      const int steps = std::max(opts.dense_q_steps, 8);
      double best = std::numeric_limits<double>::infinity();
      std::vector<double> bq;
      for (int i = 0; i <= steps; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(steps);
        std::vector<double> q = {a, 1.0 - a};
        const double v = g(q);
        if (v < best) {
          best = v;
          bq = q;
        }
      }
      starts.push_back(bq);
    }
  }
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_q;
  for (auto& s0 : starts) {
    auto [q, v] = mass_transfer_min(g, proj_simplex(s0),
                                    thorough ? 1e-9 : 1e-6);
    if (v < best_val) {
      best_val = v;
      best_q = q;
    }
  }
  out.q = Distribution(proj_simplex(best_q));
  out.bits = std::max(best_val, 0.0);
  return out;
}

}  // namespace opt_detail

// ---------------------------------------------------------------------------
// Objective evaluation.
// ---------------------------------------------------------------------------

struct InnerEval {
  double value = 0.0;       // I(U;Y_q^k) - max_{s^k} I(U;Z^k), in bits (block)
  double legit_bits = 0.0;
  double eaves_bits = 0.0;
  Word worst_s_k;
};

// Block objective at a fixed jamming mixture q: the legit mutual information
// through W_q^k minus the exact eavesdropper maximum over state words.
inline InnerEval inner_objective(const AvwcSpec& spec, const InputStructure& st,
                                 const Distribution& q,
                                 double budget = default_budget()) {
  st.validate_against(spec.a_size());
  if (q.size() != spec.s_size())
    throw std::invalid_argument("inner_objective: q over wrong state set");
  opt_detail::KContext ctx = opt_detail::build_context(spec, st.k, budget);
  InnerEval ev;
  ev.legit_bits = opt_detail::legit_mi(ctx, st, q);
  opt_detail::EavesMax em = opt_detail::eaves_max(ctx, st);
  ev.eaves_bits = em.bits;
  ev.worst_s_k = ctx.eaves_words[static_cast<std::size_t>(em.index)];
  ev.value = ev.legit_bits - ev.eaves_bits;
  return ev;
}

// Minimize I(U;Y_q^k) over the jamming simplex.  Convex (hence certified) at
// k = 1; multi-start heuristic for k >= 2.
inline CompoundMin min_over_compound(const AvwcSpec& spec, const InputStructure& st,
                                     const EvalOptions& opts = {}) {
  st.validate_against(spec.a_size());
  opt_detail::KContext ctx =
      opt_detail::build_context(spec, st.k, opts.budget_or_default());
  return opt_detail::min_over_compound_impl(ctx, st, opts, nullptr, true);
}

// ---------------------------------------------------------------------------
// The main evaluator.
// ---------------------------------------------------------------------------
namespace opt_detail {

struct AscentResult {
  InputStructure st;
  double f_bits = -std::numeric_limits<double>::infinity();
  CompoundMin cmin;
  EavesMax emax;
  long long steps = 0;
};

// Full objective with a thorough inner solve.
inline double f_full(const KContext& ctx, const InputStructure& st,
                     const EvalOptions& opts, std::vector<double>* warm_q,
                     bool thorough, CompoundMin* cmin_out, EavesMax* emax_out) {
  CompoundMin cm = min_over_compound_impl(ctx, st, opts,
                                          warm_q && !warm_q->empty() ? warm_q : nullptr,
                                          thorough);
  EavesMax em = eaves_max(ctx, st);
  if (warm_q) *warm_q = cm.q.vec();
  if (cmin_out) *cmin_out = cm;
  if (emax_out) *emax_out = em;
  return cm.bits - em.bits;
}

inline AscentResult ascend_from(const KContext& ctx, InputStructure st,
                                const EvalOptions& opts) {
  const int m = st.u_size();
  const int ak = ctx.ak;
  AscentResult res;
  std::vector<double> warm_q;
  CompoundMin cmin;
  EavesMax emax;
  double f = f_full(ctx, st, opts, &warm_q, false, &cmin, &emax);

  // Surrogate at the current inner solutions (smooth in the structure).
  auto surrogate = [&](const std::vector<double>& pu,
                       const std::vector<double>& rows, const Channel& wqk,
                       const Channel& vsk) {
    std::vector<double> ry = chain_raw(rows, m, ak, wqk);
    std::vector<double> rz = chain_raw(rows, m, ak, vsk);
    return mi_formula(pu, ry, m, wqk.out_size()) -
           mi_formula(pu, rz, m, vsk.out_size());
  };

  double base_step = 0.5;
  int stall = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Channel wq = mix_channel(ctx.spec->legit, cmin.q);
    Channel wqk = ctx.k == 1 ? wq : product_channel(wq, ctx.k);
    const Channel& vsk = ctx.eaves_k[static_cast<std::size_t>(emax.index)];

    std::vector<double> pu = st.p_u.vec();
    std::vector<double> rows = st.p_x_given_u.raw();

    // Numeric ambient gradient of the surrogate (central differences).
    const double h = 1e-6;
    std::vector<double> gpu(static_cast<std::size_t>(m), 0.0);
    for (int u = 0; u < m; ++u) {
      std::vector<double> p1 = pu, p2 = pu;
      p1[static_cast<std::size_t>(u)] += h;
      p2[static_cast<std::size_t>(u)] -= h;
      gpu[static_cast<std::size_t>(u)] =
          (surrogate(p1, rows, wqk, vsk) - surrogate(p2, rows, wqk, vsk)) / (2 * h);
    }
    std::vector<double> grows(static_cast<std::size_t>(m) * ak, 0.0);
    for (std::size_t i = 0; i < grows.size(); ++i) {
      std::vector<double> r1 = rows, r2 = rows;
      r1[i] += h;
      r2[i] -= h;
      grows[i] = (surrogate(pu, r1, wqk, vsk) - surrogate(pu, r2, wqk, vsk)) / (2 * h);
    }

    bool accepted = false;

    // Candidate 1: projected gradient step with backtracking on the true F.
    double t = base_step;
    for (int ls = 0; ls < 10 && !accepted; ++ls) {
      std::vector<double> pu_c(static_cast<std::size_t>(m));
      for (int u = 0; u < m; ++u)
        pu_c[static_cast<std::size_t>(u)] =
            pu[static_cast<std::size_t>(u)] + t * gpu[static_cast<std::size_t>(u)];
      pu_c = proj_simplex(std::move(pu_c));
      std::vector<double> rows_c(static_cast<std::size_t>(m) * ak);
      for (int u = 0; u < m; ++u) {
        std::vector<double> row(static_cast<std::size_t>(ak));
        for (int x = 0; x < ak; ++x)
          row[static_cast<std::size_t>(x)] =
              rows[static_cast<std::size_t>(u) * ak + x] +
              t * grows[static_cast<std::size_t>(u) * ak + x];
        row = proj_simplex(std::move(row));
        for (int x = 0; x < ak; ++x)
          rows_c[static_cast<std::size_t>(u) * ak + x] = row[static_cast<std::size_t>(x)];
      }
      InputStructure cand(st.k, Distribution(pu_c), Channel(m, ak, rows_c));
      std::vector<double> wq_c = warm_q;
      const double fc = f_full(ctx, cand, opts, &wq_c, false, nullptr, nullptr);
      if (fc > f + 1e-13) {
        st = std::move(cand);
        f = fc;
        warm_q = std::move(wq_c);
        accepted = true;
        base_step = std::min(base_step * 1.6, 2.0);
      } else {
        t *= 0.3;
      }
    }

    // Candidate 2: multiplicative weight update on p_u (exponentiated
    // per-symbol information scores; recovers the classical capacity
    // iteration when the eavesdropper term vanishes).
    if (!accepted) {
      std::vector<double> ry = chain_raw(rows, m, ak, wqk);
      std::vector<double> rz = chain_raw(rows, m, ak, vsk);
      std::vector<double> ybar(static_cast<std::size_t>(wqk.out_size()), 0.0),
          zbar(static_cast<std::size_t>(vsk.out_size()), 0.0);
      for (int u = 0; u < m; ++u) {
        for (int y = 0; y < wqk.out_size(); ++y)
          ybar[static_cast<std::size_t>(y)] +=
              pu[static_cast<std::size_t>(u)] *
              ry[static_cast<std::size_t>(u) * wqk.out_size() + y];
        for (int z = 0; z < vsk.out_size(); ++z)
          zbar[static_cast<std::size_t>(z)] +=
              pu[static_cast<std::size_t>(u)] *
              rz[static_cast<std::size_t>(u) * vsk.out_size() + z];
      }
      std::vector<double> score(static_cast<std::size_t>(m), 0.0);
      for (int u = 0; u < m; ++u) {
        double d = 0.0;
        for (int y = 0; y < wqk.out_size(); ++y) {
          const double tuy = ry[static_cast<std::size_t>(u) * wqk.out_size() + y];
          if (tuy > 0.0)
            d += tuy * std::log2(tuy / std::max(ybar[static_cast<std::size_t>(y)], 1e-300));
        }
        for (int z = 0; z < vsk.out_size(); ++z) {
          const double tuz = rz[static_cast<std::size_t>(u) * vsk.out_size() + z];
          if (tuz > 0.0)
            d -= tuz * std::log2(tuz / std::max(zbar[static_cast<std::size_t>(z)], 1e-300));
        }
        score[static_cast<std::size_t>(u)] = std::clamp(d, -50.0, 50.0);
      }
      std::vector<double> target(static_cast<std::size_t>(m));
      double norm = 0.0;
      for (int u = 0; u < m; ++u) {
        target[static_cast<std::size_t>(u)] =
            std::max(pu[static_cast<std::size_t>(u)], 1e-300) *
            std::exp2(score[static_cast<std::size_t>(u)]);
        norm += target[static_cast<std::size_t>(u)];
      }
      for (double& v : target) v /= norm;
      for (double tt : {1.0, 0.5, 0.25, 0.1}) {
        std::vector<double> pu_c(static_cast<std::size_t>(m));
        for (int u = 0; u < m; ++u)
          pu_c[static_cast<std::size_t>(u)] =
              (1.0 - tt) * pu[static_cast<std::size_t>(u)] +
              tt * target[static_cast<std::size_t>(u)];
        InputStructure cand(st.k, Distribution(proj_simplex(pu_c)), st.p_x_given_u);
        std::vector<double> wq_c = warm_q;
        const double fc = f_full(ctx, cand, opts, &wq_c, false, nullptr, nullptr);
        if (fc > f + 1e-13) {
          st = std::move(cand);
          f = fc;
          warm_q = std::move(wq_c);
          accepted = true;
          break;
        }
      }
    }

    if (accepted) {
      ++res.steps;
      stall = 0;
      // Keep the inner solutions in sync with the accepted structure.
      f = f_full(ctx, st, opts, &warm_q, false, &cmin, &emax);
    } else {
      base_step *= 0.25;
      if (++stall >= 3 || base_step < 1e-9) break;
    }
  }

  // Final thorough inner solve defines the reported value.
  res.f_bits = f_full(ctx, st, opts, &warm_q, true, &cmin, &emax);
  res.st = st;
  res.cmin = cmin;
  res.emax = emax;
  return res;
}

inline InputStructure identity_like_structure(int k, int m, int ak) {
  std::vector<double> rows(static_cast<std::size_t>(m) * ak, 0.0);
  for (int u = 0; u < m; ++u) {
    const int x = static_cast<int>((static_cast<long long>(u) * ak) / m);
    rows[static_cast<std::size_t>(u) * ak + x] = 1.0;
  }
  return InputStructure(k, Distribution::uniform(m), Channel(m, ak, rows));
}

inline InputStructure product_lift_structure(const InputStructure& s1, int k,
                                             int a_size) {
  // k-fold product of a single-letter structure: U^k with independent
  // components, P(x^k | u^k) = prod_i P(x_i | u_i).
  const int m1 = s1.u_size();
  const int mk = static_cast<int>(pow_checked(static_cast<std::uint64_t>(m1),
                                              static_cast<unsigned>(k)));
  const int ak = static_cast<int>(pow_checked(static_cast<std::uint64_t>(a_size),
                                              static_cast<unsigned>(k)));
  std::vector<double> pu(static_cast<std::size_t>(mk));
  Word uw(static_cast<std::size_t>(k), 0);
  std::size_t idx = 0;
  do {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= s1.p_u[uw[static_cast<std::size_t>(i)]];
    pu[idx++] = p;
  } while (next_word(uw, m1));
  std::vector<double> rows(static_cast<std::size_t>(mk) * ak);
  uw.assign(static_cast<std::size_t>(k), 0);
  std::size_t ui = 0;
  do {
    Word xw(static_cast<std::size_t>(k), 0);
    std::size_t xi = 0;
    do {
      double p = 1.0;
      for (int i = 0; i < k; ++i)
        p *= s1.p_x_given_u.prob(uw[static_cast<std::size_t>(i)],
                                 xw[static_cast<std::size_t>(i)]);
      rows[ui * static_cast<std::size_t>(ak) + xi] = p;
      ++xi;
    } while (next_word(xw, a_size));
    ++ui;
  } while (next_word(uw, m1));
  return InputStructure(k, Distribution::normalized(std::move(pu)),
                        Channel(mk, ak, std::move(rows)));
}

}  // namespace opt_detail

// Multi-start ascent estimate of the blocklength-k secrecy objective,
// reported in bits per letter and clamped at 0 from below (the constant-U
// structure always achieves 0 exactly).
inline CapacityEstimate evaluate_RSk(const AvwcSpec& spec, int k,
                                     const EvalOptions& opts = {}) {
  if (k < 1) throw std::invalid_argument("evaluate_RSk: k < 1");
  spec.validate();
  const double budget = opts.budget_or_default();
  opt_detail::KContext ctx = opt_detail::build_context(spec, k, budget);
  const int ak = ctx.ak;
  const int m = opts.u_cap > 0 ? std::min(opts.u_cap, ak) : ak;

  std::vector<InputStructure> starts;
  starts.push_back(opt_detail::identity_like_structure(k, m, ak));
  if (k >= 2) {
    EvalOptions sub = opts;
    sub.restarts = std::max(4, opts.restarts / 2);
    sub.seed = derive_seed(opts.seed, 0xA17Cull);
    sub.u_cap = 0;
    CapacityEstimate base = evaluate_RSk(spec, 1, sub);
    InputStructure lifted =
        opt_detail::product_lift_structure(base.argmax, k, spec.a_size());
    if (lifted.u_size() <= m) starts.push_back(lifted);
  }
  {
    std::vector<double> rows(static_cast<std::size_t>(m) * ak,
                             1.0 / static_cast<double>(ak));
    starts.push_back(InputStructure(k, Distribution::uniform(m),
                                    Channel(m, ak, std::move(rows))));
  }
  Rng rng(derive_seed(opts.seed, 0x5EEDull));
  {
    InputStructure ident = opt_detail::identity_like_structure(k, m, ak);
    starts.push_back(InputStructure(k, rng.simplex_point(m), ident.p_x_given_u));
  }
  while (static_cast<int>(starts.size()) < opts.restarts) {
    std::vector<double> rows;
    rows.reserve(static_cast<std::size_t>(m) * ak);
    for (int u = 0; u < m; ++u) {
      Distribution row = rng.simplex_point(ak);
      rows.insert(rows.end(), row.vec().begin(), row.vec().end());
    }
    starts.push_back(InputStructure(k, rng.simplex_point(m),
                                    Channel(m, ak, std::move(rows))));
  }

  opt_detail::AscentResult best;
  CapacityDiagnostics diag;
  diag.restarts = static_cast<int>(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    opt_detail::AscentResult r = opt_detail::ascend_from(ctx, starts[i], opts);
    diag.ascent_steps += r.steps;
    if (r.f_bits > best.f_bits) {
      best = std::move(r);
      diag.best_restart = static_cast<int>(i);
    }
  }
  diag.heuristic_min = (k >= 2 && spec.s_size() >= 2);
  diag.raw_bits = best.f_bits;

  CapacityEstimate est;
  est.k = k;
  est.diag = diag;
  if (!(best.f_bits > 1e-15)) {
    // Clamped at zero: report the constant-U structure, whose objective is
    // exactly 0 for every q and every state word.
    InputStructure flat(k, Distribution::point_mass(m, 0),
                        opt_detail::identity_like_structure(k, m, ak).p_x_given_u);
    est.value = 0.0;
    est.argmax = flat;
    CompoundMin cm = opt_detail::min_over_compound_impl(ctx, flat, opts, nullptr, true);
    est.worst_q = cm.q;
    est.worst_s_k = ctx.eaves_words[0];
    est.diag.raw_bits = best.f_bits;
    return est;
  }
  est.value = best.f_bits / static_cast<double>(k);
  est.argmax = best.st;
  est.worst_q = best.cmin.q;
  est.worst_s_k = ctx.eaves_words[static_cast<std::size_t>(best.emax.index)];
  return est;
}

// ---------------------------------------------------------------------------
// Compound-list variant (k = 1, U = X): maximize over input distributions
//   min_r I(X;Y_r) - max_s I(X;Z_s)
// with exact enumeration of both the finite compound list and the
// eavesdropper states (the mixture maximum is attained at a vertex).
// ---------------------------------------------------------------------------
inline CapacityEstimate evaluate_RS_dagger(const CavwcSpec& spec,
                                           const EvalOptions& opts = {}) {
  spec.validate();
  const int a = spec.a_size();

  auto f_at = [&](const Distribution& p, int* worst_r, int* worst_s) {
    double miny = std::numeric_limits<double>::infinity();
    int br = 0;
    for (int r = 0; r < spec.r_size(); ++r) {
      const double v = mutual_information(p, spec.compound[static_cast<std::size_t>(r)]);
      if (v < miny) {
        miny = v;
        br = r;
      }
    }
    double maxz = -1.0;
    int bs = 0;
    for (int s = 0; s < spec.s_size(); ++s) {
      const double v = mutual_information(p, spec.eaves[static_cast<std::size_t>(s)]);
      if (v > maxz) {
        maxz = v;
        bs = s;
      }
    }
    if (worst_r) *worst_r = br;
    if (worst_s) *worst_s = bs;
    return miny - maxz;
  };

  auto surrogate = [&](const std::vector<double>& p, int r, int s) {
    return opt_detail::mi_formula(p, spec.compound[static_cast<std::size_t>(r)].raw(),
                                  a, spec.b_size()) -
           opt_detail::mi_formula(p, spec.eaves[static_cast<std::size_t>(s)].raw(),
                                  a, spec.c_size());
  };

  Rng rng(derive_seed(opts.seed, 0xDA66ull));
  std::vector<Distribution> starts;
  starts.push_back(Distribution::uniform(a));
  while (static_cast<int>(starts.size()) < std::max(opts.restarts, 2))
    starts.push_back(rng.simplex_point(a));

  double best_f = -std::numeric_limits<double>::infinity();
  Distribution best_p = Distribution::uniform(a);
  int best_r = 0, best_s = 0;
  long long steps = 0;
  for (const auto& p0 : starts) {
    Distribution p = p0;
    int wr = 0, ws = 0;
    double f = f_at(p, &wr, &ws);
    double base_step = 0.5;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      // Ambient numeric gradient of the surrogate at the active (r, s).
      const double h = 1e-6;
      std::vector<double> g(static_cast<std::size_t>(a));
      std::vector<double> pv = p.vec();
      for (int x = 0; x < a; ++x) {
        std::vector<double> p1 = pv, p2 = pv;
        p1[static_cast<std::size_t>(x)] += h;
        p2[static_cast<std::size_t>(x)] -= h;
        g[static_cast<std::size_t>(x)] =
            (surrogate(p1, wr, ws) - surrogate(p2, wr, ws)) / (2 * h);
      }
      bool accepted = false;
      double t = base_step;
      for (int ls = 0; ls < 12 && !accepted; ++ls) {
        std::vector<double> cand(static_cast<std::size_t>(a));
        for (int x = 0; x < a; ++x)
          cand[static_cast<std::size_t>(x)] =
              pv[static_cast<std::size_t>(x)] + t * g[static_cast<std::size_t>(x)];
        Distribution pc(opt_detail::proj_simplex(std::move(cand)));
        int cr = 0, cs = 0;
        const double fc = f_at(pc, &cr, &cs);
        if (fc > f + 1e-13) {
          p = std::move(pc);
          f = fc;
          wr = cr;
          ws = cs;
          accepted = true;
          ++steps;
          base_step = std::min(base_step * 1.6, 2.0);
        } else {
          t *= 0.3;
        }
      }
      if (!accepted) {
        base_step *= 0.25;
        if (base_step < 1e-9) break;
      }
    }
    if (f > best_f) {
      best_f = f;
      best_p = p;
      best_r = 0;
      best_s = 0;
      f_at(best_p, &best_r, &best_s);
    }
  }

  CapacityEstimate est;
  est.k = 1;
  est.value = std::max(best_f, 0.0);
  est.argmax = InputStructure(1, best_p, Channel::identity(a));
  est.worst_s_k = Word{best_s};
  est.diag.restarts = static_cast<int>(starts.size());
  est.diag.ascent_steps = steps;
  est.diag.raw_bits = best_f;
  est.diag.worst_r = best_r;
  if (!spec.compound_labels.empty())
    est.worst_q = spec.compound_labels[static_cast<std::size_t>(best_r)];
  return est;
}

// ---------------------------------------------------------------------------
// Single-letter evaluator for the degraded product-state regime.
// ---------------------------------------------------------------------------

namespace opt_detail {
inline std::optional<int> best_eaves_index(const std::vector<Channel>& v,
                                           double tol) {
  for (int cand = 0; cand < static_cast<int>(v.size()); ++cand) {
    bool ok = true;
    for (int s = 0; s < static_cast<int>(v.size()) && ok; ++s) {
      if (s == cand) continue;
      ok = degraded_check(v[static_cast<std::size_t>(cand)],
                          v[static_cast<std::size_t>(s)], tol)
               .feasible;
    }
    if (ok) return cand;
  }
  return std::nullopt;
}
}  // namespace opt_detail

// For state sets factoring as S = S1 x S2 with the legit side driven by s1
// only, the eavesdropper side by s2 only, every eavesdropper channel degraded
// with respect to every (gridded) legit mixture, and a best channel to the
// eavesdropper present, the rate reduces to
//   max_p [ min_{q1} I(p; W_{q1}) - max_{s2} I(p; V_{s2}) ].
// Preconditions are verified and violations throw with the failed check.
inline double evaluate_single_letter_degraded(const AvwcSpec& spec, int s1_size,
                                              int s2_size,
                                              const std::vector<Distribution>& q1_grid,
                                              const EvalOptions& opts = {}) {
  StrongDegradednessReport rep =
      strongly_degraded_check(spec, s1_size, s2_size, q1_grid);
  if (!rep.holds())
    throw std::invalid_argument(
        "evaluate_single_letter_degraded: strongly_degraded_check failed: " +
        rep.failure);
  std::vector<Channel> w1, v2;
  for (int s1 = 0; s1 < s1_size; ++s1)
    w1.push_back(spec.legit[static_cast<std::size_t>(s1 * s2_size)]);
  for (int s2 = 0; s2 < s2_size; ++s2)
    v2.push_back(spec.eaves[static_cast<std::size_t>(s2)]);
  if (!opt_detail::best_eaves_index(v2, 1e-7).has_value())
    throw std::invalid_argument(
        "evaluate_single_letter_degraded: best_eavesdropper_check failed: no "
        "state dominates the eavesdropper family");

  const int a = spec.a_size();
  auto f_at = [&](const Distribution& p, std::vector<double>* warm) {
    auto [q1, miny] = opt_detail::min_mixture_mi(
        w1, p, opts.inner_tol, warm && !warm->empty() ? warm : nullptr);
    if (warm) *warm = q1.vec();
    double maxz = -1.0;
    for (const auto& v : v2)
      maxz = std::max(maxz, mutual_information(p, v));
    return miny - maxz;
  };

  Rng rng(derive_seed(opts.seed, 0xD36ull));
  std::vector<Distribution> starts;
  starts.push_back(Distribution::uniform(a));
  while (static_cast<int>(starts.size()) < std::max(opts.restarts, 2))
    starts.push_back(rng.simplex_point(a));

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p0 : starts) {
    Distribution p = p0;
    std::vector<double> warm;
    double f = f_at(p, &warm);
    double base_step = 0.5;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      // Numeric gradient of the true objective (the inner min is cheap and
      // warm-started, so finite differences on F itself are affordable and
      // avoid surrogate bias near mixture switches).
      const double h = 1e-6;
      std::vector<double> pv = p.vec();
      std::vector<double> g(static_cast<std::size_t>(a));
      for (int x = 0; x < a; ++x) {
        std::vector<double> p1 = pv, p2 = pv;
        p1[static_cast<std::size_t>(x)] += h;
        p2[static_cast<std::size_t>(x)] -= h;
        std::vector<double> w1c = warm, w2c = warm;
        g[static_cast<std::size_t>(x)] =
            (f_at(Distribution(opt_detail::proj_simplex(p1)), &w1c) -
             f_at(Distribution(opt_detail::proj_simplex(p2)), &w2c)) /
            (2 * h);
      }
      bool accepted = false;
      double t = base_step;
      for (int ls = 0; ls < 12 && !accepted; ++ls) {
        std::vector<double> cand(static_cast<std::size_t>(a));
        for (int x = 0; x < a; ++x)
          cand[static_cast<std::size_t>(x)] =
              pv[static_cast<std::size_t>(x)] + t * g[static_cast<std::size_t>(x)];
        Distribution pc(opt_detail::proj_simplex(std::move(cand)));
        std::vector<double> wc = warm;
        const double fc = f_at(pc, &wc);
        if (fc > f + 1e-13) {
          p = std::move(pc);
          f = fc;
          warm = std::move(wc);
          accepted = true;
          base_step = std::min(base_step * 1.6, 2.0);
        } else {
          t *= 0.3;
        }
      }
      if (!accepted) {
        base_step *= 0.25;
        if (base_step < 1e-9) break;
      }
    }
    best = std::max(best, f);
  }
  return std::max(best, 0.0);
}

// ---------------------------------------------------------------------------
// Continuity probe.
// ---------------------------------------------------------------------------

struct ContinuityRow {
  double radius = 0.0;     // requested perturbation size
  double achieved_d = 0.0; // measured family distance of the perturbed spec
  double delta_value = 0.0;  // |R_hat(perturbed) - R_hat(original)|
};

struct ContinuityReport {
  double base_value = 0.0;
  std::vector<ContinuityRow> rows;

  double max_delta_for(double radius) const {
    double m = 0.0;
    for (const auto& r : rows)
      if (r.radius == radius) m = std::max(m, r.delta_value);
    return m;
  }
};

// Move every channel row toward a random simplex point by at most `radius`
// in (unhalved) row total variation; the result stays row-stochastic.
inline AvwcSpec perturb_spec(const AvwcSpec& spec, double radius,
                             std::uint64_t seed) {
  if (radius < 0.0) throw std::invalid_argument("perturb_spec: negative radius");
  AvwcSpec out = spec;
  if (radius == 0.0) return out;
  Rng rng(seed);
  auto perturb_family = [&](std::vector<Channel>& family) {
    for (auto& ch : family) {
      std::vector<double> w = ch.raw();
      const int in = ch.in_size(), o = ch.out_size();
      for (int x = 0; x < in; ++x) {
        Distribution u = rng.simplex_point(o);
        double tv = 0.0;
        for (int y = 0; y < o; ++y)
          tv += std::abs(u[y] - w[static_cast<std::size_t>(x) * o + y]);
        if (tv == 0.0) continue;
        const double t = std::min(radius / tv, 1.0);
        for (int y = 0; y < o; ++y) {
          double& e = w[static_cast<std::size_t>(x) * o + y];
          e = (1.0 - t) * e + t * u[y];
        }
      }
      ch = Channel(in, o, std::move(w));
    }
  };
  perturb_family(out.legit);
  perturb_family(out.eaves);
  return out;
}

inline ContinuityReport continuity_probe(const AvwcSpec& spec,
                                         const std::vector<double>& radii, int k,
                                         int trials, const EvalOptions& opts = {}) {
  if (trials < 1) throw std::invalid_argument("continuity_probe: trials < 1");
  ContinuityReport rep;
  rep.base_value = evaluate_RSk(spec, k, opts).value;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed =
          derive_seed(opts.seed, 1000003ull * ri + static_cast<std::uint64_t>(t));
      AvwcSpec pert = perturb_spec(spec, radii[ri], seed);
      ContinuityRow row;
      row.radius = radii[ri];
      row.achieved_d = hausdorff_distance(spec, pert);
      row.delta_value = std::abs(evaluate_RSk(pert, k, opts).value - rep.base_value);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Grid-search oracle (deliberately simple; shares only the probability
// primitives with the ascent path above).
// ---------------------------------------------------------------------------

namespace opt_detail {
inline std::vector<std::vector<double>> simplex_grid(int dim, int resolution) {
  std::vector<std::vector<double>> pts;
  for (const auto& comp : compositions(resolution, dim)) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
      p[static_cast<std::size_t>(i)] =
          static_cast<double>(comp[static_cast<std::size_t>(i)]) /
          static_cast<double>(resolution);
    pts.push_back(std::move(p));
  }
  // The uniform point matters for coarse grids; append it if absent.
  bool has_uniform = false;
  for (const auto& p : pts) {
    bool eq = true;
    for (double v : p)
      if (std::abs(v - 1.0 / dim) > 1e-12) eq = false;
    if (eq) has_uniform = true;
  }
  if (!has_uniform)
    pts.push_back(std::vector<double>(static_cast<std::size_t>(dim), 1.0 / dim));
  return pts;
}
}  // namespace opt_detail

inline double brute_force_oracle(const AvwcSpec& spec, int k, int resolution,
                                 const EvalOptions& opts = {}) {
  if (resolution < 1) throw std::invalid_argument("brute_force_oracle: resolution < 1");
  const double budget = opts.budget_or_default();
  opt_detail::KContext ctx = opt_detail::build_context(spec, k, budget);
  const int ak = ctx.ak;
  const int m = opts.u_cap > 0 ? std::min(opts.u_cap, ak) : ak;

  const auto pu_grid = opt_detail::simplex_grid(m, resolution);
  const auto row_grid = opt_detail::simplex_grid(ak, resolution);
  const double combos = static_cast<double>(pu_grid.size()) *
                        std::pow(static_cast<double>(row_grid.size()), m);
  // Dense jamming grid for the inner min.
  std::vector<std::vector<double>> q_grid;
  const int ns = spec.s_size();
  if (ns == 1) {
    q_grid.push_back({1.0});
  } else {
    const int q_steps = ns == 2 ? std::max(opts.dense_q_steps, 16) : 16;
    q_grid = opt_detail::simplex_grid(ns, q_steps);
  }
  check_budget(combos * static_cast<double>(q_grid.size() + ctx.eaves_k.size()),
               budget, "brute_force_oracle");

  double best = 0.0;  // the constant-U structure attains exactly 0
  std::vector<std::size_t> row_idx(static_cast<std::size_t>(m), 0);
  for (const auto& pu : pu_grid) {
    // Odometer over the m row choices.
    std::fill(row_idx.begin(), row_idx.end(), 0);
    while (true) {
      std::vector<double> rows(static_cast<std::size_t>(m) * ak);
      for (int u = 0; u < m; ++u)
        for (int x = 0; x < ak; ++x)
          rows[static_cast<std::size_t>(u) * ak + x] =
              row_grid[row_idx[static_cast<std::size_t>(u)]][static_cast<std::size_t>(x)];
      InputStructure st(k, Distribution(pu), Channel(m, ak, rows));

      double miny = std::numeric_limits<double>::infinity();
      for (const auto& q : q_grid)
        miny = std::min(miny, opt_detail::legit_mi(ctx, st, Distribution(q)));
      const double maxz = opt_detail::eaves_max(ctx, st).bits;
      best = std::max(best, miny - maxz);

      int pos = m - 1;
      while (pos >= 0) {
        if (++row_idx[static_cast<std::size_t>(pos)] < row_grid.size()) break;
        row_idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return std::max(best, 0.0) / static_cast<double>(k);
}

}  // namespace avwc
