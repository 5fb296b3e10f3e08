// Secrecy-rate evaluators against independent oracles: Blahut-Arimoto for
// the degenerate (useless-eavesdropper) case, binary-entropy closed forms
// for degraded pairs, vertex/minimax structure of the inner problem, and
// the perturbation-continuity probe.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "avwc/budget.hpp"
#include "avwc/capacity.hpp"
#include "avwc/channel.hpp"
#include "avwc/prob.hpp"
#include "oracles.hpp"

using namespace avwc;

namespace {

AvwcSpec single_state(const Channel& w, const Channel& v) {
  return AvwcSpec({}, {w}, {v});
}

Channel useless(int a, int c) {
  return Channel::constant_output(a, Distribution::uniform(c));
}

}  // namespace

TEST_CASE("degenerate specs match Blahut-Arimoto") {
  std::mt19937_64 g(101);
  for (int t = 0; t < 3; ++t) {
    const int a = 2 + static_cast<int>(g() % 3);
    const int b = 2 + static_cast<int>(g() % 3);
    const auto rows = oracle::random_stochastic(a, b, g);
    const AvwcSpec spec = single_state(Channel(rows), useless(a, 2));
    EvalOptions opts;
    opts.restarts = 12;
    opts.seed = 900 + static_cast<std::uint64_t>(t);
    const CapacityEstimate est = evaluate_RSk(spec, 1, opts);
    CHECK(est.value == Catch::Approx(oracle::ba_capacity(rows)).margin(1e-3));
    CHECK(est.worst_s_k.size() == 1);
    CHECK(est.argmax.k == 1);
  }
}

TEST_CASE("degraded BSC pair hits the binary-entropy closed form") {
  const double expect = oracle::h2(0.2) - oracle::h2(0.1);
  const AvwcSpec spec = single_state(Channel::bsc(0.1), Channel::bsc(0.2));

  SECTION("one-letter evaluator") {
    const CapacityEstimate est = evaluate_RSk(spec, 1, {});
    CHECK(est.value == Catch::Approx(expect).margin(1e-6));
  }
  SECTION("compound evaluator on the singleton lists") {
    const CapacityEstimate est =
        evaluate_RS_dagger(CavwcSpec({Channel::bsc(0.1)}, {Channel::bsc(0.2)}), {});
    CHECK(est.value == Catch::Approx(expect).margin(1e-6));
  }
  SECTION("degraded-regime evaluator") {
    const double v = evaluate_single_letter_degraded(
        spec, 1, 1, default_q_grid(1, 4, 3), {});
    CHECK(v == Catch::Approx(expect).margin(1e-6));
  }
}

TEST_CASE("eavesdropper equal to legit receiver forces rate zero") {
  std::mt19937_64 g(103);
  for (int t = 0; t < 2; ++t) {
    std::vector<Channel> w{Channel(oracle::random_stochastic(2, 2, g)),
                           Channel(oracle::random_stochastic(2, 2, g))};
    const AvwcSpec spec({}, w, w);
    EvalOptions opts;
    opts.seed = 40 + static_cast<std::uint64_t>(t);
    const CapacityEstimate est = evaluate_RSk(spec, 1, opts);
    CHECK(est.value == 0.0);
    // Bit-identical under the same seed: the determinism contract.
    const CapacityEstimate again = evaluate_RSk(spec, 1, opts);
    CHECK(again.value == est.value);
    CHECK(again.diag.ascent_steps == est.diag.ascent_steps);
  }
}

TEST_CASE("eavesdropper mixtures never beat the worst state word") {
  std::mt19937_64 g(107);
  const AvwcSpec spec({},
                      {Channel(oracle::random_stochastic(2, 2, g)),
                       Channel(oracle::random_stochastic(2, 2, g))},
                      {Channel(oracle::random_stochastic(2, 3, g)),
                       Channel(oracle::random_stochastic(2, 3, g))});
  for (int t = 0; t < 100; ++t) {
    const Distribution pu{oracle::random_stochastic(1, 2, g)[0]};
    const Channel pxu(oracle::random_stochastic(2, 2, g));
    const Distribution q{oracle::random_stochastic(1, 2, g)[0]};
    const double mixed =
        mutual_information(pu, chain(pxu, mix_channel(spec.eaves, q)));
    double worst = 0.0;
    for (int s = 0; s < 2; ++s)
      worst = std::max(worst, mutual_information(
                                  pu, chain(pxu, spec.eaves[static_cast<std::size_t>(s)])));
    CHECK(mixed <= worst + 1e-9);
  }
}

TEST_CASE("inner jamming minimization") {
  const Distribution pu = Distribution::uniform(2);
  const InputStructure st(1, pu, Channel::identity(2));

  SECTION("minimum at the noisier vertex") {
    const AvwcSpec spec({}, {Channel::bsc(0.1), Channel::bsc(0.45)},
                        {useless(2, 2), useless(2, 2)});
    const CompoundMin m = min_over_compound(spec, st, {});
    CHECK(m.bits == Catch::Approx(1.0 - oracle::h2(0.45)).margin(1e-7));
    CHECK(m.q[1] == Catch::Approx(1.0).margin(1e-5));
  }
  SECTION("interior minimum: opposing crossovers cancel") {
    const AvwcSpec spec({}, {Channel::bsc(0.1), Channel::bsc(0.9)},
                        {useless(2, 2), useless(2, 2)});
    const CompoundMin m = min_over_compound(spec, st, {});
    CHECK(m.bits == Catch::Approx(0.0).margin(1e-7));
    CHECK(m.q[0] == Catch::Approx(0.5).margin(1e-3));
  }
  SECTION("inner objective reports both terms") {
    const AvwcSpec spec = single_state(Channel::bsc(0.1), Channel::bsc(0.2));
    const InnerEval ev =
        inner_objective(spec, st, Distribution::point_mass(1, 0));
    CHECK(ev.legit_bits == Catch::Approx(1.0 - oracle::h2(0.1)).margin(1e-12));
    CHECK(ev.eaves_bits == Catch::Approx(1.0 - oracle::h2(0.2)).margin(1e-12));
    CHECK(ev.value == Catch::Approx(ev.legit_bits - ev.eaves_bits));
    CHECK(ev.worst_s_k == Word{0});
  }
}

TEST_CASE("two-letter evaluation") {
  SECTION("single-state BSC: per-letter value survives the lift") {
    const AvwcSpec spec = single_state(Channel::bsc(0.1), useless(2, 2));
    EvalOptions opts;
    opts.restarts = 8;
    const double k1 = evaluate_RSk(spec, 1, opts).value;
    const double k2 = evaluate_RSk(spec, 2, opts).value;
    CHECK(k1 == Catch::Approx(1.0 - oracle::h2(0.1)).margin(1e-6));
    CHECK(k2 >= k1 - 2e-3);
  }
}

TEST_CASE("grid oracle floors the ascent result") {
  const AvwcSpec noiseless = single_state(Channel::identity(2), useless(2, 2));
  CHECK(brute_force_oracle(noiseless, 1, 1, {}) ==
        Catch::Approx(1.0).margin(1e-12));

  std::mt19937_64 g(109);
  const AvwcSpec spec =
      single_state(Channel(oracle::random_stochastic(2, 2, g)),
                   Channel(oracle::random_stochastic(2, 2, g)));
  const double coarse = brute_force_oracle(spec, 1, 4, {});
  const double opt = evaluate_RSk(spec, 1, {}).value;
  CHECK(opt >= coarse - 1e-7);
}

TEST_CASE("compound-list evaluator on symmetric channels") {
  const CavwcSpec spec({Channel::bsc(0.05), Channel::bsc(0.15)},
                       {Channel::bsc(0.35), Channel::bsc(0.45)});
  const CapacityEstimate est = evaluate_RS_dagger(spec, {});
  // Uniform input is optimal for symmetric families; the worst legit member
  // is the noisier BSC(0.15), the best eavesdropper state is BSC(0.35).
  const double expect = oracle::h2(0.35) - oracle::h2(0.15);
  CHECK(est.value == Catch::Approx(expect).margin(1e-6));
  CHECK(est.diag.worst_r == 1);
  CHECK(est.worst_s_k == Word{0});
  CHECK(est.argmax.p_u[0] == Catch::Approx(0.5).margin(1e-4));
}

TEST_CASE("perturbation probe") {
  const AvwcSpec spec = single_state(Channel::bsc(0.1), Channel::bsc(0.25));

  SECTION("perturbed specs stay stochastic and close") {
    for (double radius : {0.1, 0.01}) {
      const AvwcSpec pert = perturb_spec(spec, radius, 77);
      pert.validate();
      for (const auto& ch : pert.legit)
        for (int x = 0; x < 2; ++x)
          CHECK(ch.prob(x, 0) + ch.prob(x, 1) == Catch::Approx(1.0).margin(1e-12));
      CHECK(hausdorff_distance(spec, pert) <= radius + 1e-12);
    }
  }

  SECTION("zero radius and duplicated states do not move the value") {
    EvalOptions opts;
    opts.restarts = 6;
    const ContinuityReport rep = continuity_probe(spec, {0.0}, 1, 2, opts);
    CHECK(rep.max_delta_for(0.0) <= 5.0 * 1e-4);
    const AvwcSpec dup = duplicate_states(spec, 2);
    const double base = evaluate_RSk(spec, 1, opts).value;
    const double dup_v = evaluate_RSk(dup, 1, opts).value;
    CHECK(std::abs(dup_v - base) <= 5.0 * 1e-4);
  }
}

TEST_CASE("enumeration budgets are enforced") {
  const AvwcSpec spec = single_state(Channel::bsc(0.1), Channel::bsc(0.2));
  EvalOptions opts;
  opts.budget = 2.0;
  CHECK_THROWS_AS(evaluate_RSk(spec, 1, opts), BudgetError);
}
