// Channel families: mixtures, products, prefixing, degradedness
// certification, best-eavesdropper detection, and the family distance.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "avwc/channel.hpp"
#include "avwc/prob.hpp"
#include "oracles.hpp"

using namespace avwc;

namespace {

Channel random_channel(int in, int out, std::mt19937_64& g) {
  return Channel(oracle::random_stochastic(in, out, g));
}

AvwcSpec random_spec(int s, int a, int b, int c, std::mt19937_64& g) {
  std::vector<Channel> w, v;
  for (int i = 0; i < s; ++i) {
    w.push_back(random_channel(a, b, g));
    v.push_back(random_channel(a, c, g));
  }
  return AvwcSpec({}, std::move(w), std::move(v));
}

double max_abs_diff(const Channel& a, const Channel& b) {
  double d = 0.0;
  for (int x = 0; x < a.in_size(); ++x)
    for (int y = 0; y < a.out_size(); ++y)
      d = std::max(d, std::abs(a.prob(x, y) - b.prob(x, y)));
  return d;
}

}  // namespace

TEST_CASE("state mixtures") {
  std::mt19937_64 g(31);
  std::vector<Channel> fam{random_channel(2, 3, g), random_channel(2, 3, g),
                           random_channel(2, 3, g)};

  SECTION("vertices reproduce members bit-exactly") {
    for (int s = 0; s < 3; ++s) {
      const Channel m = mix_channel(fam, Distribution::point_mass(3, s));
      CHECK(max_abs_diff(m, fam[static_cast<std::size_t>(s)]) == 0.0);
    }
  }

  SECTION("mixing is affine") {
    const Distribution q1{oracle::random_stochastic(1, 3, g)[0]};
    const Distribution q2{oracle::random_stochastic(1, 3, g)[0]};
    const double lam = 0.3;
    std::vector<double> mixq(3);
    for (int s = 0; s < 3; ++s) mixq[static_cast<std::size_t>(s)] =
        lam * q1[s] + (1.0 - lam) * q2[s];
    const Channel lhs = mix_channel(fam, Distribution(mixq));
    const Channel m1 = mix_channel(fam, q1);
    const Channel m2 = mix_channel(fam, q2);
    double d = 0.0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 3; ++y)
        d = std::max(d, std::abs(lhs.prob(x, y) - lam * m1.prob(x, y) -
                                 (1.0 - lam) * m2.prob(x, y)));
    CHECK(d <= 1e-12);
  }

  SECTION("half-half over BSC(0) and BSC(0.2) is BSC(0.1)") {
    const Channel m = mix_channel({Channel::bsc(0.0), Channel::bsc(0.2)},
                                  Distribution({0.5, 0.5}));
    CHECK(max_abs_diff(m, Channel::bsc(0.1)) <= 1e-15);
  }
}

TEST_CASE("sequence transition products") {
  std::vector<Channel> fam{Channel::bsc(0.1), Channel::bsc(0.3)};
  CHECK(sequence_transition(fam, Word{0}, Word{1}, Word{1}) ==
        Catch::Approx(0.3).margin(1e-15));
  CHECK(sequence_transition(fam, Word{0, 0}, Word{0, 1}, Word{0, 0}) ==
        Catch::Approx(0.9 * 0.1).margin(1e-15));
  // A zero factor annihilates the product.
  std::vector<Channel> det{Channel::identity(2)};
  CHECK(sequence_transition(det, Word{0, 1}, Word{0, 0}, Word{0, 0}) == 0.0);

  SECTION("sums to one over all outputs") {
    std::mt19937_64 g(37);
    std::vector<Channel> rf{random_channel(2, 2, g), random_channel(2, 2, g)};
    for (int n = 1; n <= 5; ++n) {
      Rng rng(derive_seed(5, static_cast<std::uint64_t>(n)));
      Word x(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n));
      for (auto& v : x) v = rng.index(2);
      for (auto& v : s) v = rng.index(2);
      double total = 0.0;
      Word y(static_cast<std::size_t>(n), 0);
      do {
        total += sequence_transition(rf, x, y, s);
      } while (next_word(y, 2));
      CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("products, lifts, and prefixing") {
  std::mt19937_64 g(41);
  const Channel w = random_channel(2, 2, g);

  SECTION("k-letter product matches per-letter factors") {
    const Channel w2 = product_channel(w, 2);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        CHECK(w2.prob(x, y) ==
              Catch::Approx(w.prob(x / 2, y / 2) * w.prob(x % 2, y % 2))
                  .margin(1e-15));
  }

  SECTION("lift sizes and vertex grid") {
    AvwcSpec spec = random_spec(2, 2, 2, 2, g);
    std::vector<Distribution> grid{Distribution::point_mass(2, 0),
                                   Distribution::point_mass(2, 1)};
    const CavwcSpec lifted = k_letter_lift(spec, 2, grid);
    CHECK(lifted.r_size() == 2);
    CHECK(lifted.s_size() == 4);
    CHECK(lifted.a_size() == 4);
    // Vertex grid: compound members are the per-state two-letter products.
    for (int r = 0; r < 2; ++r) {
      const Channel expect =
          product_channel(spec.legit[static_cast<std::size_t>(r)], 2);
      CHECK(max_abs_diff(lifted.compound[static_cast<std::size_t>(r)],
                         expect) <= 1e-12);
    }
    // Singleton state set: single compound channel.
    AvwcSpec single({}, {w}, {random_channel(2, 2, g)});
    const CavwcSpec l1 =
        k_letter_lift(single, 2, {Distribution::point_mass(1, 0)});
    CHECK(l1.r_size() == 1);
  }

  SECTION("prefix map composes on the left") {
    // Identity embedding reproduces the one-letter channel.
    const CavwcSpec base({w}, {random_channel(2, 2, g)});
    const CavwcSpec same = prefix_channel(base, Channel::identity(2), 1);
    CHECK(max_abs_diff(same.compound[0], w) <= 1e-15);
    // A constant prefix row makes every lifted row identical.
    const Channel t = Channel::constant_output(3, Distribution({0.5, 0.5}));
    const CavwcSpec lifted = prefix_channel(base, t, 1);
    CHECK(lifted.a_size() == 3);
    for (int u = 1; u < 3; ++u)
      for (int y = 0; y < 2; ++y)
        CHECK(lifted.compound[0].prob(u, y) ==
              Catch::Approx(lifted.compound[0].prob(0, y)).margin(1e-15));
    // Uniform row through BSC(0.1) gives the uniform output law.
    const CavwcSpec fair = prefix_channel(
        CavwcSpec({Channel::bsc(0.1)}, {Channel::bsc(0.3)}),
        Channel(1, 2, {0.5, 0.5}), 1);
    CHECK(fair.compound[0].prob(0, 0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(fair.compound[0].prob(0, 1) == Catch::Approx(0.5).margin(1e-15));
  }
}

TEST_CASE("degradedness certification") {
  SECTION("identity and constant targets are degraded") {
    const Channel w = Channel::bsc(0.15);
    const DegradednessCertificate self = degraded_check(w, w);
    CHECK(self.feasible);
    CHECK(self.residual <= 1e-7);
    const DegradednessCertificate con = degraded_check(
        w, Channel::constant_output(2, Distribution({0.3, 0.7})));
    CHECK(con.feasible);
  }

  SECTION("BSC pair: unique intermediate map is BSC(1/8)") {
    const DegradednessCertificate cert =
        degraded_check(Channel::bsc(0.1), Channel::bsc(0.2));
    REQUIRE(cert.feasible);
    CHECK(cert.residual <= 1e-7);
    CHECK(cert.map.prob(0, 1) == Catch::Approx(0.125).margin(1e-6));
    CHECK(cert.map.prob(1, 0) == Catch::Approx(0.125).margin(1e-6));
    // Composing the certificate with W reproduces V.
    const Channel recon = chain(Channel::bsc(0.1), cert.map);
    CHECK(max_abs_diff(recon, Channel::bsc(0.2)) <= 1e-7);
  }

  SECTION("constructed chains are feasible with small residual") {
    std::mt19937_64 g(43);
    for (int t = 0; t < 25; ++t) {
      const Channel w = random_channel(3, 3, g);
      const Channel t1 = random_channel(3, 2, g);
      const DegradednessCertificate c1 = degraded_check(w, chain(w, t1));
      CHECK(c1.feasible);
      CHECK(c1.residual <= 1e-7);
      // Degrading further preserves feasibility (transitivity).
      const Channel t2 = random_channel(2, 2, g);
      const DegradednessCertificate c2 =
          degraded_check(w, chain(chain(w, t1), t2));
      CHECK(c2.feasible);
    }
  }

  SECTION("noisier-to-cleaner direction is infeasible") {
    const DegradednessCertificate cert =
        degraded_check(Channel::bsc(0.2), Channel::identity(2));
    CHECK_FALSE(cert.feasible);
    CHECK(cert.residual > 1e-4);
  }
}

TEST_CASE("best eavesdropper state") {
  std::mt19937_64 g(47);
  SECTION("singleton family") {
    AvwcSpec spec({}, {Channel::bsc(0.1)}, {Channel::bsc(0.3)});
    CHECK(best_eavesdropper_check(spec) == 0);
  }
  SECTION("BSC family ordered by crossover") {
    AvwcSpec spec({}, {random_channel(2, 2, g), random_channel(2, 2, g)},
                  {Channel::bsc(0.1), Channel::bsc(0.3)});
    CHECK(best_eavesdropper_check(spec) == 0);
  }
  SECTION("incomparable asymmetric channels") {
    const Channel zch(2, 2, {1.0, 0.0, 0.3, 0.7});
    const Channel sch(2, 2, {0.7, 0.3, 0.0, 1.0});
    AvwcSpec spec({}, {random_channel(2, 2, g), random_channel(2, 2, g)},
                  {zch, sch});
    CHECK_FALSE(best_eavesdropper_check(spec).has_value());
  }
}

TEST_CASE("strong degradedness with independent state factors") {
  const auto grid = default_q_grid(2, 16, 3);
  SECTION("noiseless legit, one noisy eavesdropper state") {
    // S1 = {two copies of a noiseless W}, S2 = {BSC(0.2)}: states ordered
    // s = s1 * |S2| + s2.
    AvwcSpec spec({}, {Channel::identity(2), Channel::identity(2)},
                  {Channel::bsc(0.2), Channel::bsc(0.2)});
    const StrongDegradednessReport rep =
        strongly_degraded_check(spec, 2, 1, grid);
    CHECK(rep.product_structure_ok);
    CHECK(rep.degraded_ok);
    CHECK(rep.holds());
  }
  SECTION("noiseless eavesdropper breaks degradedness") {
    AvwcSpec spec({}, {Channel::bsc(0.2)}, {Channel::identity(2)});
    const StrongDegradednessReport rep = strongly_degraded_check(
        spec, 1, 1, default_q_grid(1, 4, 3));
    CHECK(rep.product_structure_ok);
    CHECK_FALSE(rep.degraded_ok);
    CHECK_FALSE(rep.holds());
  }
  SECTION("state coupling violates the product structure") {
    AvwcSpec spec({}, {Channel::bsc(0.1), Channel::bsc(0.3)},
                  {Channel::bsc(0.2), Channel::bsc(0.2)});
    const StrongDegradednessReport rep =
        strongly_degraded_check(spec, 1, 2, default_q_grid(1, 4, 3));
    CHECK_FALSE(rep.product_structure_ok);
    CHECK_FALSE(rep.holds());
  }
}

TEST_CASE("family distance") {
  std::mt19937_64 g(53);
  SECTION("pseudometric properties on random triples") {
    for (int t = 0; t < 20; ++t) {
      const AvwcSpec a = random_spec(2, 2, 2, 2, g);
      const AvwcSpec b = random_spec(2, 2, 2, 2, g);
      const AvwcSpec c = random_spec(2, 2, 2, 2, g);
      CHECK(hausdorff_distance(a, a) == 0.0);
      CHECK(hausdorff_distance(a, b) ==
            Catch::Approx(hausdorff_distance(b, a)).margin(1e-12));
      CHECK(hausdorff_distance(a, c) <=
            hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-9);
    }
  }
  SECTION("duplicated states do not move the family") {
    const AvwcSpec a = random_spec(2, 2, 2, 2, g);
    const AvwcSpec dup = duplicate_states(a, 2);
    CHECK(dup.s_size() == 2 * a.s_size());
    CHECK(hausdorff_distance(a, dup) == 0.0);
  }
  SECTION("row total variation drives the operator distance") {
    CHECK(operator_norm_distance(Channel::bsc(0.1), Channel::bsc(0.3)) ==
          Catch::Approx(0.4).margin(1e-12));
  }
}
