// Permutation symmetrization: coordinate permutations, permuted codes,
// correlated (shared-randomness) codes, the permutation-average lemma for
// [0,1] functions of state words, and the joint-law permutation identity.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <avwc/robustify.hpp>

using namespace avwc;

namespace {

AvwcSpec two_state_spec() {
  return AvwcSpec({"s0", "s1"}, {Channel::bsc(0.1), Channel::bsc(0.2)},
                  {Channel::bsc(0.25), Channel::bsc(0.4)});
}

WiretapCode small_code(const AvwcSpec& avwc, int n, long long J, long long L,
                       double delta, std::uint64_t seed) {
  CodeParams params;
  params.n = n;
  params.J = J;
  params.L = L;
  params.delta = delta;
  params.input_dist = Distribution::uniform(avwc.a_size());
  return make_wiretap_code(cavwc_from_avwc(avwc), params, seed);
}

}  // namespace

TEST_CASE("coordinate permutations act by index lookup and invert exactly") {
  SECTION("the action convention: (pi w)_i = w[map[i]]") {
    Permutation pi({1, 2, 0});
    CHECK(pi.apply({0, 1, 2}) == Word{1, 2, 0});
    CHECK(pi.apply({7, 7, 3}) == Word{7, 3, 7});
  }

  SECTION("identity acts trivially") {
    Permutation id = Permutation::identity(4);
    CHECK(id.is_identity());
    CHECK(id.apply({3, 1, 2, 0}) == Word{3, 1, 2, 0});
  }

  SECTION("inverse composes to the identity on words") {
    Rng rng(17u);
    for (int t = 0; t < 30; ++t) {
      Permutation pi = random_permutation(6, rng);
      Permutation inv = pi.inverse();
      Word w;
      for (int i = 0; i < 6; ++i) w.push_back(rng.index(5));
      CHECK(inv.apply(pi.apply(w)) == w);
      CHECK(pi.apply(inv.apply(w)) == w);
    }
  }

  SECTION("non-bijections are rejected") {
    CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({-1, 0, 1}), std::invalid_argument);
  }

  SECTION("full enumeration: 3! distinct members, larger n refused") {
    std::vector<Permutation> all = all_permutations(3);
    REQUIRE(all.size() == 6);
    std::set<std::vector<int>> maps;
    for (const auto& p : all) maps.insert(p.map);
    CHECK(maps.size() == 6);
    CHECK_THROWS_AS(all_permutations(9), BudgetError);
    CHECK(all_permutations(1).size() == 1);
  }

  SECTION("random permutations are reproducible per seed") {
    Rng a(5u), b(5u), c(6u);
    Permutation pa = random_permutation(8, a);
    Permutation pb = random_permutation(8, b);
    Permutation pc = random_permutation(8, c);
    CHECK(pa.map == pb.map);
    CHECK(pa.map != pc.map);
  }
}

TEST_CASE("permuting a code permutes its behavior, not its quality") {
  const AvwcSpec avwc = two_state_spec();
  WiretapCode code = small_code(avwc, 4, 2, 2, 0.3, 51u);

  SECTION("identity and inverse round-trip the codebook") {
    Permutation id = Permutation::identity(4);
    CHECK(permute_code(code, id).codebook.words == code.codebook.words);
    Rng rng(3u);
    Permutation pi = random_permutation(4, rng);
    WiretapCode back = permute_code(permute_code(code, pi), pi.inverse());
    CHECK(back.codebook.words == code.codebook.words);
  }

  SECTION("permuted code at the permuted state word has the original error") {
    Rng rng(29u);
    for (int t = 0; t < 4; ++t) {
      Permutation pi = random_permutation(4, rng);
      Word s_n;
      for (int i = 0; i < 4; ++i) s_n.push_back(rng.index(2));
      ErrorReport base = average_error(code, avwc, {s_n});
      ErrorReport perm =
          average_error(permute_code(code, pi), avwc, {pi.apply(s_n)});
      CHECK(perm.message_error ==
            Catch::Approx(base.message_error).margin(1e-12));
      CHECK(perm.pair_error == Catch::Approx(base.pair_error).margin(1e-12));
    }
  }

  SECTION("length mismatch is rejected") {
    CHECK_THROWS_AS(permute_code(code, Permutation::identity(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("correlated codes mix permuted copies under shared randomness") {
  const AvwcSpec avwc = two_state_spec();
  WiretapCode code = small_code(avwc, 4, 2, 2, 0.3, 51u);

  SECTION("a singleton mixture reproduces its only member") {
    CorrelatedCode cc = robustify(code, 1, 99u);
    REQUIRE(cc.members() == 1);
    const Word s_n = {0, 1, 1, 0};
    CorrelatedErrorReport rep = correlated_error(cc, avwc, {s_n});
    ErrorReport member = average_error(cc.member(0), avwc, {s_n});
    CHECK(rep.message_error == Catch::Approx(member.message_error).margin(1e-15));
    CHECK(rep.pair_error == Catch::Approx(member.pair_error).margin(1e-15));
  }

  SECTION("full mode enumerates the symmetric group with uniform weights") {
    CorrelatedCode cc = robustify(code, 0, 0u, true);
    REQUIRE(cc.members() == 24);
    for (int g = 0; g < 24; ++g)
      CHECK(cc.weights[g] == Catch::Approx(1.0 / 24.0).margin(1e-15));
    WiretapCode big = small_code(avwc, 7, 1, 2, 0.4, 5u);
    CHECK_THROWS_AS(robustify(big, 0, 0u, true), BudgetError);
  }

  SECTION("sampled mode validates the member count") {
    CHECK_THROWS_AS(robustify(code, 0, 1u), std::invalid_argument);
  }

  SECTION("the support cap is enforced on validate") {
    CorrelatedCode cc = robustify(code, 4, 7u);
    cc.support_cap = 4;
    CHECK_NOTHROW(cc.validate());
    cc.support_cap = 3;
    CHECK_THROWS_AS(cc.validate(), std::invalid_argument);
  }

  SECTION("the full-group error is a function of the state-word type only") {
    CorrelatedCode cc = robustify(code, 0, 0u, true);
    CorrelatedErrorReport a = correlated_error(cc, avwc, {{0, 0, 1, 1}});
    CorrelatedErrorReport b = correlated_error(cc, avwc, {{1, 0, 1, 0}});
    CorrelatedErrorReport c = correlated_error(cc, avwc, {{1, 1, 0, 0}});
    CHECK(a.message_error == Catch::Approx(b.message_error).margin(1e-12));
    CHECK(a.message_error == Catch::Approx(c.message_error).margin(1e-12));
  }

  SECTION("the full-group error equals the type-class mean of the base error") {
    CorrelatedCode cc = robustify(code, 0, 0u, true);
    const std::vector<Word> type_class = {
        {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0},
        {1, 0, 0, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}};
    double mean = 0.0;
    for (const Word& s_n : type_class)
      mean += average_error(code, avwc, {s_n}).message_error;
    mean /= static_cast<double>(type_class.size());
    CorrelatedErrorReport rep = correlated_error(cc, avwc, {{0, 1, 1, 0}});
    CHECK(rep.message_error == Catch::Approx(mean).margin(1e-12));
  }

  SECTION("exhaustive state enumeration tracks the worst word") {
    CorrelatedCode cc = robustify(code, 3, 11u);
    CorrelatedErrorReport all = correlated_error(cc, avwc, {});
    Word s_n(4, 0);
    double worst = 0.0;
    do {
      worst = std::max(worst,
                       correlated_error(cc, avwc, {s_n}).message_error);
    } while (next_word(s_n, 2));
    CHECK(all.message_error == Catch::Approx(worst).margin(1e-12));
  }
}

TEST_CASE("correlated leakage averages members and never beats the worst") {
  const AvwcSpec avwc = two_state_spec();
  WiretapCode code = small_code(avwc, 4, 2, 2, 0.3, 51u);
  const Word s_n = {0, 1, 0, 1};

  SECTION("mean versus max ordering") {
    CorrelatedCode cc = robustify(code, 5, 23u);
    CorrelatedLeakage cl = correlated_leakage(cc, s_n);
    CHECK(cl.mean_bits <= cl.max_bits + 1e-15);
    CHECK(cl.mean_bits >= 0.0);
  }

  SECTION("a singleton mixture reports its member on both lines") {
    CorrelatedCode cc = robustify(code, 1, 23u);
    CorrelatedLeakage cl = correlated_leakage(cc, s_n);
    const double bits = leakage(cc.member(0), s_n);
    CHECK(cl.mean_bits == Catch::Approx(bits).margin(1e-15));
    CHECK(cl.max_bits == Catch::Approx(bits).margin(1e-15));
  }

  SECTION("non-uniform weights enter the mean linearly") {
    CorrelatedCode cc;
    cc.base = code;
    cc.permutations = {Permutation::identity(4), Permutation({1, 0, 2, 3})};
    cc.weights = Distribution({0.25, 0.75});
    cc.validate();
    const double l0 = leakage(cc.member(0), s_n);
    const double l1 = leakage(cc.member(1), s_n);
    CorrelatedLeakage cl = correlated_leakage(cc, s_n);
    CHECK(cl.mean_bits == Catch::Approx(0.25 * l0 + 0.75 * l1).margin(1e-15));
    CHECK(cl.max_bits == Catch::Approx(std::max(l0, l1)).margin(1e-15));
  }

  SECTION("a blind eavesdropper yields zero through every member") {
    AvwcSpec blind({"s0"}, {Channel::bsc(0.1)},
                   {Channel::constant_output(2, Distribution::uniform(2))});
    WiretapCode bc = small_code(blind, 3, 2, 2, 0.5, 9u);
    CorrelatedCode cc = robustify(bc, 0, 0u, true);
    CorrelatedLeakage cl = correlated_leakage(cc, {0, 0, 0});
    CHECK(cl.mean_bits <= 1e-12);
    CHECK(cl.max_bits <= 1e-12);
  }
}

TEST_CASE("the permutation-average lemma is checked exactly per type") {
  SECTION("a constant success function meets the hypothesis with zero slack") {
    std::vector<double> f(16, 1.0);
    RtReport rep = rt_check(f, 4, 2, 0.0);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.hypothesis_margin == Catch::Approx(0.0).margin(1e-15));
    CHECK(rep.bound == 1.0);
    CHECK(rep.conclusion_holds);
    CHECK(rep.types_checked == 5);
  }

  SECTION("a uniform deficit saturates the hypothesis at eps") {
    std::vector<double> f(16, 0.875);
    RtReport rep = rt_check(f, 4, 2, 0.125);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.hypothesis_margin == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.bound == Catch::Approx(1.0 - 3.0 * 25.0 * 0.125).margin(1e-12));
    RtReport tight = rt_check(f, 4, 2, 0.0625);
    CHECK_FALSE(tight.hypothesis_holds);
    CHECK(tight.hypothesis_margin == Catch::Approx(-0.0625).margin(1e-12));
  }

  SECTION("hand-computed type sums at blocklength two") {
    // f indexed lexicographically over {0,1}^2: f(00), f(01), f(10), f(11).
    std::vector<double> f = {1.0, 0.5, 0.7, 1.0};
    RtReport rep = rt_check(f, 2, 2, 0.2);
    CHECK(rep.types_checked == 3);
    // Types (2,0) and (0,2) see only the constant words (value 1); type (1,1)
    // under q = (1/2, 1/2) averages all four values: 0.8 = 1 - eps exactly.
    CHECK(rep.hypothesis_holds);
    CHECK(rep.hypothesis_margin == Catch::Approx(0.0).margin(1e-12));
    CHECK(rep.bound == Catch::Approx(1.0 - 3.0 * 9.0 * 0.2).margin(1e-12));
    // Class means: 1, (0.5 + 0.7) / 2 = 0.6, 1; the worst sits 5.0 above the bound.
    CHECK(rep.conclusion_margin == Catch::Approx(0.6 - rep.bound).margin(1e-12));
    CHECK(rep.conclusion_holds);
  }

  SECTION("inputs are validated") {
    std::vector<double> f(16, 1.0);
    CHECK_THROWS_AS(rt_check(f, 3, 2, 0.0), std::invalid_argument);  // size 8 != 16
    CHECK_THROWS_AS(rt_check(f, 4, 2, -0.1), std::invalid_argument);
    std::vector<double> bad(16, 1.0);
    bad[3] = 1.5;
    CHECK_THROWS_AS(rt_check(bad, 4, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rt_check(std::vector<double>(4, 1.0), 2, 2, 0.0, 10.0),
                    BudgetError);
  }

  SECTION("a real success table from a small code passes end to end") {
    const AvwcSpec avwc = two_state_spec();
    WiretapCode code = small_code(avwc, 4, 2, 2, 0.3, 51u);
    std::vector<double> f;
    Word s_n(4, 0);
    do {
      f.push_back(1.0 - average_error(code, avwc, {s_n}).message_error);
    } while (next_word(s_n, 2));
    REQUIRE(f.size() == 16);

    RtReport probe = rt_check(f, 4, 2, 0.0);
    const double eps = std::max(0.0, -probe.hypothesis_margin) + 1e-12;
    RtReport rep = rt_check(f, 4, 2, eps);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.conclusion_holds);

    // The full-group correlated error at any word equals one minus the mean
    // of f over its type class, so the lemma's conclusion bounds it directly.
    CorrelatedCode cc = robustify(code, 0, 0u, true);
    CorrelatedErrorReport worst = correlated_error(cc, avwc, {});
    CHECK(worst.message_error <= 1.0 - rep.bound + 1e-9);
  }
}

TEST_CASE("the joint-law permutation identity holds exactly at small blocklength") {
  const AvwcSpec avwc = two_state_spec();
  WiretapCode code = small_code(avwc, 3, 2, 2, 0.5, 33u);

  SECTION("all six permutations times all eight state words") {
    for (const Permutation& pi : all_permutations(3)) {
      Word s_n(3, 0);
      do {
        PermIdentityReport rep = perm_identity_check(code, s_n, pi);
        CHECK(rep.equal);
        CHECK(rep.max_abs_diff <= 1e-12);
      } while (next_word(s_n, 2));
    }
  }

  SECTION("length mismatch is rejected") {
    CHECK_THROWS_AS(perm_identity_check(code, {0, 0, 0}, Permutation::identity(4)),
                    std::invalid_argument);
  }
}
