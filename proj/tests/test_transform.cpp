#include <cmath>
#include <vector>

#include "doctest.h"
#include "gibbs1d/transform.hpp"
#include "oracles.hpp"

using namespace gibbs1d;

namespace {

const Alphabet kBits({"0", "1"});

}  // namespace

TEST_SUITE_BEGIN("transform");

TEST_CASE("site kernel validates rows") {
  Alphabet spins = oracles::spin_alphabet();
  CHECK_THROWS_AS(SiteKernel(spins, kBits, {{0.6, 0.3}, {0.5, 0.5}}), error);
  CHECK_THROWS_AS(SiteKernel(spins, kBits, {{0.9, 0.1}}), error);
  CHECK_THROWS_AS(SiteKernel(spins, kBits, {{1.1, -0.1}, {0.5, 0.5}}), error);

  SiteKernel k(spins, kBits, {{0.9, 0.1}, {0.2, 0.8}});
  CHECK(k.prob(0, 0) == 0.9);
  CHECK(k.prob(1, 0) == doctest::Approx(0.1));
  CHECK(k.strictly_positive());
  CHECK(k.log_bound() == doctest::Approx(-std::log(0.1)).epsilon(1e-14));

  SiteKernel hard(spins, kBits, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(!hard.strictly_positive());
  CHECK_THROWS_AS((void)hard.log_bound(), error);
}

TEST_CASE("det map requires surjectivity and lists preimages") {
  Alphabet abc({"a", "b", "c"});
  Alphabet xy({"x", "y"});
  DetMap map(abc, xy, {0, 0, 1});
  CHECK(map.apply(1) == 0);
  CHECK(map.preimages(0) == std::vector<Sym>{0, 1});
  CHECK(map.preimages(1) == std::vector<Sym>{2});

  CHECK_THROWS_AS(DetMap(abc, xy, {0, 0, 0}), error);
  try {
    DetMap(abc, xy, {0, 0, 0});
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("y") != std::string::npos);
  }

  const SiteKernel k = map.as_kernel();
  CHECK(k.prob(0, 1) == 1.0);
  CHECK(k.prob(1, 1) == 0.0);
  CHECK(k.prob(1, 2) == 1.0);
}

TEST_CASE("channel helpers dispatch across the variant") {
  Channel noisy = SiteKernel(oracles::spin_alphabet(), kBits, {{0.9, 0.1}, {0.1, 0.9}});
  Channel det = oracles::fuzzy_3to2();
  CHECK(channel_source(noisy).size() == 2);
  CHECK(channel_target(det).name(1) == "y");
  CHECK(channel_as_kernel(det).prob(0, 0) == 1.0);
  CHECK(channel_as_kernel(noisy).prob(0, 0) == 0.9);
}

TEST_CASE("pushforward matches the nested-loop reference") {
  const Potential pot = oracles::ising_nn(0.5);
  const Interval volume(-1, 1);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(1), 0);
  const FiniteGibbs g = compute_finite_gibbs(pot, volume, zeta, make_truncation(pot, 1));

  const SiteKernel k = oracles::binary_flip(0.2);
  const ProbTable nu = pushforward_exact(g, Channel(k));
  const std::vector<double> slow = oracles::slow_pushforward(g.probs, 3, 2, 2, k);
  REQUIRE(nu.probs.size() == slow.size());
  double total = 0.0;
  for (size_t i = 0; i < slow.size(); ++i) {
    CHECK(nu.probs[i] == doctest::Approx(slow[i]).epsilon(1e-13));
    total += nu.probs[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu.sites == std::vector<int>{-1, 0, 1});

  // deterministic channel against its 0/1 kernel
  const Potential potts = oracles::potts3_nn(0.3);
  const SpinConfig zp = SpinConfig::constant(volume.expand(1), 2);
  const FiniteGibbs gp = compute_finite_gibbs(potts, volume, zp, make_truncation(potts, 1));
  const DetMap fuzzy = oracles::fuzzy_3to2();
  const ProbTable nu_det = pushforward_exact(gp, Channel(fuzzy));
  const std::vector<double> slow_det =
      oracles::slow_pushforward(gp.probs, 3, 3, 2, fuzzy.as_kernel());
  REQUIRE(nu_det.probs.size() == slow_det.size());
  for (size_t i = 0; i < slow_det.size(); ++i)
    CHECK(nu_det.probs[i] == doctest::Approx(slow_det[i]).epsilon(1e-13));
}

TEST_CASE("conditional scan agrees with direct slicing of the pushforward") {
  const Potential pot = oracles::ising_nn(0.4);
  const int n = 2;
  const Interval window(-n, n);
  const SpinConfig zeta = SpinConfig::constant(window.expand(1), 1);
  const SiteKernel k = oracles::binary_flip(0.1);
  const TruncationSpec trunc = make_truncation(pot, 1);

  const ConditionalScan scan = bruteforce_conditional_scan(pot, Channel(k), n, zeta, trunc);
  REQUIRE(scan.value.size() == 32);
  REQUIRE(scan.q_target == 2);

  const FiniteGibbs g = compute_finite_gibbs(pot, window, zeta, trunc);
  const std::vector<double> nu = oracles::slow_pushforward(g.probs, 2 * n + 1, 2, 2, k);
  const IndexSpace space(window, 2);
  std::vector<Sym> xi;
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    space.decode(idx, xi);
    CHECK(scan.supported[idx] == 1);
    const double want = oracles::slow_conditional_at_origin(nu, n, 2, xi, xi[size_t(n)]);
    CHECK(scan.value[idx] == doctest::Approx(want).epsilon(1e-12));
    // and the one-configuration entry point returns the same number
    const double one = transformed_conditional_bruteforce(pot, Channel(k), n,
                                                          SpinConfig(window, xi), zeta, trunc);
    CHECK(one == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("a kernel with an unreachable symbol yields unsupported entries") {
  // target symbol 1 is never emitted
  const SiteKernel k(oracles::spin_alphabet(), kBits, {{1.0, 0.0}, {1.0, 0.0}});
  const Potential pot = oracles::ising_nn(0.3);
  const SpinConfig zeta = SpinConfig::constant(Interval(-2, 2), 0);
  const ConditionalScan scan =
      bruteforce_conditional_scan(pot, Channel(k), 1, zeta, make_truncation(pot, 1));
  const IndexSpace space(Interval(-1, 1), 2);
  std::vector<Sym> xi;
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    space.decode(idx, xi);
    const bool rest_reachable = xi[0] == 0 && xi[2] == 0;
    CHECK(scan.supported[idx] == (rest_reachable ? 1 : 0));
    if (!rest_reachable)
      CHECK(std::isnan(scan.value[idx]));
    else
      CHECK(scan.value[idx] == doctest::Approx(xi[1] == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("the modified potential absorbs the kernel on singletons") {
  const Potential pot = oracles::ising_nn(0.4);
  const SiteKernel k = oracles::binary_flip(0.25);
  const SpinConfig xi(Interval(-1, 1), {0, 1, 0});
  const Potential mod = modified_potential(pot, k, xi);
  const SpinConfig cover = SpinConfig::constant(Interval(-2, 2), 1);
  for (int site = -1; site <= 1; ++site) {
    const double diff = mod.evaluate(Interval(site, site), cover) -
                        pot.evaluate(Interval(site, site), cover);
    CHECK(diff == doctest::Approx(-std::log(k.prob(xi.at(site), cover.at(site)))).epsilon(1e-13));
  }
  // pair interactions untouched
  CHECK(mod.evaluate(Interval(0, 1), cover) == pot.evaluate(Interval(0, 1), cover));
}

TEST_CASE("stochastic first layer reproduces the brute-force conditional") {
  const SiteKernel k = oracles::binary_flip(0.3);
  for (double J : {0.2, 0.8}) {
    const Potential pot = oracles::ising_nn(J);
    const TruncationSpec trunc = make_truncation(pot, 1);
    const int n = 2;
    const Interval window(-n, n);
    const SpinConfig zeta = SpinConfig::constant(window.expand(1), 0);
    const IndexSpace space(window, 2);
    std::vector<Sym> xi;
    for (uint64_t idx = 0; idx < space.count; idx += 3) {
      space.decode(idx, xi);
      const SpinConfig xc(window, xi);
      const double brute = transformed_conditional_bruteforce(pot, Channel(k), n, xc, zeta, trunc);
      const double layered =
          transformed_conditional_firstlayer_stochastic(pot, k, n, xc, zeta, trunc);
      CHECK(layered == doctest::Approx(brute).epsilon(1e-11));
    }
  }
}

TEST_CASE("stochastic first layer refuses kernels with zero entries") {
  const Potential pot = oracles::ising_nn(0.2);
  const SiteKernel hard(oracles::spin_alphabet(), kBits, {{1.0, 0.0}, {0.0, 1.0}});
  const SpinConfig xi = SpinConfig::constant(Interval(-1, 1), 0);
  const SpinConfig zeta = SpinConfig::constant(Interval(-2, 2), 0);
  CHECK_THROWS_AS((void)transformed_conditional_firstlayer_stochastic(
                      pot, hard, 1, xi, zeta, make_truncation(pot, 1)),
                  error);
  try {
    (void)transformed_conditional_firstlayer_stochastic(pot, hard, 1, xi, zeta,
                                                        make_truncation(pot, 1));
  } catch (const error& e) {
    CHECK(e.code() == errc::model_condition);
  }
}

TEST_CASE("deterministic first layer reproduces the brute-force conditional") {
  const Potential pot = oracles::potts3_nn(0.4);
  const DetMap fuzzy = oracles::fuzzy_3to2();
  const TruncationSpec trunc = make_truncation(pot, 1);
  const int n = 2;
  const Interval window(-n, n);
  for (Sym b : {0, 2}) {
    const SpinConfig zeta = SpinConfig::constant(window.expand(1), b);
    const IndexSpace space(window, 2);
    std::vector<Sym> eta;
    for (uint64_t idx = 0; idx < space.count; ++idx) {
      space.decode(idx, eta);
      const SpinConfig ec(window, eta);
      const double brute =
          transformed_conditional_bruteforce(pot, Channel(fuzzy), n, ec, zeta, trunc);
      const double layered =
          transformed_conditional_firstlayer_deterministic(pot, fuzzy, n, ec, zeta, trunc);
      CHECK(layered == doctest::Approx(brute).epsilon(1e-11));
    }
  }
}

TEST_CASE("constrained first layer enumerates exactly the preimage product") {
  const Potential pot = oracles::potts3_nn(0.3);
  const DetMap fuzzy = oracles::fuzzy_3to2();
  const Interval volume(-1, 1);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(1), 1);
  const SpinConfig eta(volume, {0, 1, 1});
  const ConstrainedFirstLayer layer =
      constrained_first_layer(pot, fuzzy, volume, zeta, eta, make_truncation(pot, 1));
  REQUIRE(layer.allowed.size() == 3);
  CHECK(layer.allowed[0] == std::vector<Sym>{0, 1});  // preimage of x
  CHECK(layer.allowed[2] == std::vector<Sym>{2});     // preimage of y
  CHECK(layer.allowed[1].size() == 1);                // origin placeholder slot
  REQUIRE(layer.probs.size() == 2);

  // weights proportional to exp(-H) with the origin-free interactions only
  std::vector<double> weights;
  for (Sym s : layer.allowed[0]) {
    const SpinConfig sigma(volume, {s, 0, 2});
    const double h = oracles::slow_hamiltonian(pot, volume, sigma, zeta, 1) -
                     [&] {
                       double on = 0.0;
                       const SpinConfig cover = patch(sigma, zeta);
                       for (int lo = -1; lo <= 0; ++lo)
                         for (int hi = std::max(lo, 0); hi <= std::min(lo + 1, 1); ++hi)
                           if (lo <= 0 && 0 <= hi)
                             on += pot.evaluate(Interval(lo, hi), cover);
                       return on;
                     }();
    weights.push_back(std::exp(-h));
  }
  const double z = weights[0] + weights[1];
  CHECK(layer.probs[0] == doctest::Approx(weights[0] / z).epsilon(1e-12));
  CHECK(layer.probs[1] == doctest::Approx(weights[1] / z).epsilon(1e-12));

  const std::vector<Sym> decoded = layer.decode(1);
  CHECK(decoded[0] == 1);
  CHECK(decoded[2] == 2);
}

TEST_CASE("psi and phi split the origin weight") {
  const Potential pot = oracles::potts3_nn(0.5);
  const DetMap fuzzy = oracles::fuzzy_3to2();
  const Interval volume(-1, 1);
  const TruncationSpec trunc = make_truncation(pot, 1);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(1), 0);
  const SpinConfig sigma(volume, {1, 0, 2});  // origin slot value is ignored

  for (Sym eta0 : {0, 1}) {
    const PsiPhi got = psi_phi_zero(pot, fuzzy, volume, sigma, zeta, eta0, trunc);
    double psi = 0.0, phi = 0.0;
    for (Sym s0 = 0; s0 < 3; ++s0) {
      const SpinConfig full(volume, {1, s0, 2});
      const SpinConfig cover = patch(full, zeta);
      double h0 = 0.0;
      // intervals of diameter <= 1 containing the origin
      h0 += pot.evaluate(Interval(0, 0), cover);
      h0 += pot.evaluate(Interval(-1, 0), cover);
      h0 += pot.evaluate(Interval(0, 1), cover);
      const double w = std::exp(-h0);
      phi += w;
      if (fuzzy.apply(s0) == eta0) psi += w;
    }
    CHECK(got.psi == doctest::Approx(psi).epsilon(1e-12));
    CHECK(got.phi == doctest::Approx(phi).epsilon(1e-12));
    CHECK(got.psi <= got.phi + 1e-15);
  }
}

TEST_CASE("eta consistency holds across nested volumes") {
  const Potential pot = oracles::potts3_nn(0.35);
  const DetMap fuzzy = oracles::fuzzy_3to2();
  const TruncationSpec trunc = make_truncation(pot, 1);
  const SpinConfig zeta = SpinConfig::constant(Interval(-3, 3), 2);
  const SpinConfig eta = SpinConfig::constant(Interval(-2, 2), 0);
  CHECK(eta_consistency_check(pot, fuzzy, Interval(-1, 1), Interval(-2, 2), zeta, eta, trunc) <
        1e-12);
}

TEST_CASE("origin sums are exactly local for finite-range potentials") {
  const Potential pot = oracles::potts3_nn(0.4);
  const LocalApproxError err = local_approximation_error(pot, oracles::fuzzy_3to2(), 2,
                                                         make_truncation(pot, 1));
  CHECK(err.psi_err == 0.0);
  CHECK(err.phi_err == 0.0);
}

TEST_SUITE_END();
