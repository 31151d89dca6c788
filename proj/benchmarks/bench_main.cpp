// Microbenchmarks for the hot paths: dense Hamiltonian tables, exact
// pushforwards, the two conditional representations, and the coupling engine
// (with and without its stage-table cache).

#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "gibbs1d/coupling.hpp"
#include "gibbs1d/gibbs.hpp"
#include "gibbs1d/kozlov.hpp"
#include "gibbs1d/potential.hpp"
#include "gibbs1d/rng.hpp"
#include "gibbs1d/transform.hpp"

using namespace gibbs1d;

namespace {

Alphabet spins() { return Alphabet({"+", "-"}, std::vector<double>{1.0, -1.0}); }

Potential exp_chain(double coupling, double rate) {
  return Potential(spins(), {Term::exponential_pair(coupling, rate)});
}

SiteKernel flip(double eps) {
  return SiteKernel(spins(), Alphabet({"0", "1"}), {{1 - eps, eps}, {eps, 1 - eps}});
}

void BM_NegativeHamiltonians(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.2, 0.7);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Interval volume(-n, n);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(4), 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(negative_hamiltonians(pot, volume, zeta, trunc));
  state.SetComplexityN(volume.size());
}
BENCHMARK(BM_NegativeHamiltonians)->DenseRange(3, 9, 2)->Complexity();

void BM_FiniteGibbs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.2, 0.7);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Interval volume(-n, n);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(4), 0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_finite_gibbs(pot, volume, zeta, trunc));
}
BENCHMARK(BM_FiniteGibbs)->DenseRange(3, 9, 2);

void BM_PushforwardExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.2, 0.7);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Interval volume(-n, n);
  const SpinConfig zeta = SpinConfig::constant(volume.expand(4), 0);
  const FiniteGibbs g = compute_finite_gibbs(pot, volume, zeta, trunc);
  const Channel ch(flip(0.1));
  for (auto _ : state) benchmark::DoNotOptimize(pushforward_exact(g, ch));
}
BENCHMARK(BM_PushforwardExact)->DenseRange(2, 5);

// The two routes to the same transformed conditional. The brute-force route
// sums the full pushforward; the first-layer route only reweights singletons.
void BM_ConditionalBruteforce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.2, 0.7);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const SiteKernel k = flip(0.1);
  const SpinConfig xi = SpinConfig::constant(Interval(-n, n), 1);
  const SpinConfig zeta = SpinConfig::constant(Interval(-n - 4, n + 4), 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        transformed_conditional_bruteforce(pot, Channel(k), n, xi, zeta, trunc));
}
BENCHMARK(BM_ConditionalBruteforce)->DenseRange(2, 5);

void BM_ConditionalFirstLayer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.2, 0.7);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const SiteKernel k = flip(0.1);
  const SpinConfig xi = SpinConfig::constant(Interval(-n, n), 1);
  const SpinConfig zeta = SpinConfig::constant(Interval(-n - 4, n + 4), 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        transformed_conditional_firstlayer_stochastic(pot, k, n, xi, zeta, trunc));
}
BENCHMARK(BM_ConditionalFirstLayer)->DenseRange(2, 5);

void BM_KozlovU(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.03, 1.0);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Channel ch(flip(0.1));
  const SpinConfig xi = SpinConfig::constant(Interval(0, d), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kozlov_U(pot, ch, Interval(0, d), xi, 4, trunc));
}
BENCHMARK(BM_KozlovU)->DenseRange(1, 4);

void BM_CouplingEngineCached(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.05, 1.0);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Interval window = Interval(-l, l).expand(4);
  CouplingEngine engine(pot, l, SpinConfig::constant(window, 0),
                        SpinConfig::constant(window, 1), trunc);
  uint64_t stream = 0;
  for (auto _ : state) {
    PhiloxRng rng(7, stream++);
    benchmark::DoNotOptimize(engine.run(rng));
  }
}
BENCHMARK(BM_CouplingEngineCached)->DenseRange(2, 6, 2);

void BM_CouplingRunUncached(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.05, 1.0);
  const TruncationSpec trunc = make_truncation(pot, 4);
  const Interval window = Interval(-l, l).expand(4);
  const SpinConfig zeta = SpinConfig::constant(window, 0);
  const SpinConfig zeta_prime = SpinConfig::constant(window, 1);
  uint64_t stream = 0;
  for (auto _ : state) {
    PhiloxRng rng(7, stream++);
    benchmark::DoNotOptimize(iterative_coupling_run(pot, l, zeta, zeta_prime, rng, trunc));
  }
}
BENCHMARK(BM_CouplingRunUncached)->DenseRange(2, 6, 2);

void BM_AuxChainP0(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Potential pot = exp_chain(0.03, 1.0);
  const std::vector<double> gamma = gamma_table(decay_profile(pot), l);
  const double delta = delta_lower_bound(pot, make_truncation(pot, 4));
  for (auto _ : state) benchmark::DoNotOptimize(aux_chain_p0(AuxChain{gamma, delta}, l));
}
BENCHMARK(BM_AuxChainP0)->RangeMultiplier(4)->Range(16, 1024);

void BM_MaximalCouplingSample(benchmark::State& state) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const std::vector<double> q{0.2, 0.3, 0.5};
  PhiloxRng rng(11, 0);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_coupling_sample(p, q, rng));
}
BENCHMARK(BM_MaximalCouplingSample);

}  // namespace

BENCHMARK_MAIN();
