#include "gibbs1d/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gibbs1d {

namespace {

void validate_distribution(const std::vector<double>& p, const char* who) {
  if (p.empty()) fail(errc::invalid_input, std::string(who) + ": empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0)
      fail(errc::invalid_input, std::string(who) + ": entries must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(errc::invalid_input, std::string(who) + ": entries must sum to 1");
}

/// Inverse CDF over nonnegative weights at target in [0, sum(weights));
/// rounding residue lands on the last positive weight.
size_t inverse_cdf(const std::vector<double>& weights, double target) {
  size_t last_pos = 0;
  double c = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_pos = i;
    c += weights[i];
    if (target < c && weights[i] > 0.0) return i;
  }
  return last_pos;
}

constexpr double kZ95 = 1.959963984540054;

void wilson_interval(double p_hat, int n, double* lo, double* hi) {
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p_hat + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * static_cast<double>(n) * n)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

}  // namespace

std::pair<size_t, size_t> maximal_coupling_sample(const std::vector<double>& p,
                                                  const std::vector<double>& q, PhiloxRng& rng) {
  if (p.size() != q.size())
    fail(errc::invalid_input, "maximal_coupling_sample: tables differ in support size");
  validate_distribution(p, "maximal_coupling_sample");
  validate_distribution(q, "maximal_coupling_sample");

  std::vector<double> overlap(p.size());
  double w = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    overlap[i] = std::min(p[i], q[i]);
    w += overlap[i];
  }
  const double u = rng.next_double();
  if (u < w) {
    const size_t i = inverse_cdf(overlap, u);
    return {i, i};
  }
  std::vector<double> rp(p.size()), rq(p.size());
  double mass_p = 0.0, mass_q = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    rp[i] = std::max(0.0, p[i] - q[i]);
    rq[i] = std::max(0.0, q[i] - p[i]);
    mass_p += rp[i];
    mass_q += rq[i];
  }
  const size_t x = inverse_cdf(rp, rng.next_double() * mass_p);
  const size_t y = inverse_cdf(rq, rng.next_double() * mass_q);
  return {x, y};
}

CouplingEngine::CouplingEngine(const Potential& pot, int l, SpinConfig zeta,
                               SpinConfig zeta_prime, const TruncationSpec& trunc, uint64_t cap)
    : pot_(pot), l_(l), bc_{std::move(zeta), std::move(zeta_prime)}, trunc_(trunc), cap_(cap) {
  if (l_ < 0) fail(errc::invalid_input, "coupling: l must be >= 0");
  const Interval needed = Interval(-l_, l_).expand(trunc_.radius);
  for (const SpinConfig& bc : bc_) {
    if (!bc.window().contains(needed))
      fail(errc::invalid_input,
           "boundary-window: coupling boundary must cover [-l, l] expanded by the truncation "
           "radius");
    bc.validate_against(pot_.alphabet());
  }
  // Surface an oversized stage-0 volume now rather than inside the first run.
  (void)IndexSpace(Interval(-l_, l_), pot_.alphabet().size(), cap_);
}

const std::vector<double>& CouplingEngine::stage_table(int which, int stage,
                                                       const std::vector<Sym>& left_shell,
                                                       const std::vector<Sym>& right_shell) {
  // Only the last trunc.radius shells are visible from the shrunken volume.
  const int k0 = std::max(0, stage - trunc_.radius);
  std::vector<Sym> visible;
  visible.reserve(static_cast<size_t>(2 * (stage - k0)));
  for (int k = k0; k < stage; ++k) {
    visible.push_back(left_shell[static_cast<size_t>(k)]);
    visible.push_back(right_shell[static_cast<size_t>(k)]);
  }
  const auto key = std::make_pair(which * (l_ + 1) + stage, std::move(visible));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const Interval volume(-l_ + stage, l_ - stage);
  const Interval window = volume.expand(trunc_.radius);
  std::vector<Sym> vals = restrict_to(bc_[which], window).values();
  for (int k = k0; k < stage; ++k) {
    vals[static_cast<size_t>(-l_ + k - window.lo)] = left_shell[static_cast<size_t>(k)];
    vals[static_cast<size_t>(l_ - k - window.lo)] = right_shell[static_cast<size_t>(k)];
  }
  const FiniteGibbs g =
      compute_finite_gibbs(pot_, volume, SpinConfig(window, std::move(vals)), trunc_, cap_);
  ProbTable marg = stage < l_ ? marginal(g, {volume.lo, volume.hi}) : marginal(g, {0});
  return cache_.emplace(key, std::move(marg.probs)).first->second;
}

CouplingRun CouplingEngine::run(PhiloxRng& rng) {
  const int q = pot_.alphabet().size();
  CouplingRun out;
  out.l = l_;
  out.stages.reserve(static_cast<size_t>(l_) + 1);
  out.z.reserve(static_cast<size_t>(l_) + 1);

  std::vector<Sym> left1, right1, left2, right2;
  int z = 0;
  for (int stage = 0; stage <= l_; ++stage) {
    const std::vector<double>& t1 = stage_table(0, stage, left1, right1);
    const std::vector<double>& t2 = stage_table(1, stage, left2, right2);
    const auto [x, y] = maximal_coupling_sample(t1, t2, rng);

    StagePair sp;
    sp.left = -l_ + stage;
    sp.right = l_ - stage;
    if (stage < l_) {
      sp.a1 = static_cast<Sym>(x / static_cast<size_t>(q));
      sp.b1 = static_cast<Sym>(x % static_cast<size_t>(q));
      sp.a2 = static_cast<Sym>(y / static_cast<size_t>(q));
      sp.b2 = static_cast<Sym>(y % static_cast<size_t>(q));
    } else {
      sp.a1 = sp.b1 = static_cast<Sym>(x);
      sp.a2 = sp.b2 = static_cast<Sym>(y);
    }
    sp.matched = x == y;
    left1.push_back(sp.a1);
    right1.push_back(sp.b1);
    left2.push_back(sp.a2);
    right2.push_back(sp.b2);

    z = sp.matched ? z + 1 : 0;
    out.z.push_back(z);
    out.stages.push_back(sp);
  }
  out.matched_at_origin = out.stages.back().matched;
  return out;
}

CouplingRun iterative_coupling_run(const Potential& pot, int l, const SpinConfig& zeta,
                                   const SpinConfig& zeta_prime, PhiloxRng& rng,
                                   const TruncationSpec& trunc, uint64_t cap) {
  CouplingEngine engine(pot, l, zeta, zeta_prime, trunc, cap);
  return engine.run(rng);
}

double aux_chain_p0(const AuxChain& chain, int l) {
  if (l < 0) fail(errc::invalid_input, "aux_chain_p0: l must be >= 0");
  if (!(chain.delta > 0.0 && chain.delta < 1.0))
    fail(errc::invalid_input, "aux_chain_p0: delta must lie in (0,1)");
  if (static_cast<int>(chain.gamma.size()) < l)
    fail(errc::invalid_input, "aux_chain_p0: need gamma_0..gamma_{l-1}");
  for (double g : chain.gamma)
    if (!(g >= 0.0)) fail(errc::invalid_input, "aux_chain_p0: gamma entries must be >= 0");

  std::vector<double> p(static_cast<size_t>(l) + 1, 0.0);
  p[0] = 1.0;
  for (int step = 0; step < l; ++step) {
    std::vector<double> next(p.size(), 0.0);
    for (int m = 0; m <= step; ++m) {
      const double reset = std::min(chain.gamma[static_cast<size_t>(m)], 1.0 - chain.delta);
      next[0] += p[static_cast<size_t>(m)] * reset;
      next[static_cast<size_t>(m) + 1] += p[static_cast<size_t>(m)] * (1.0 - reset);
    }
    p.swap(next);
  }
  return p[0];
}

double delta_lower_bound(const Potential& pot, const TruncationSpec& trunc) {
  (void)trunc;  // the full-potential bound also covers every truncation
  const double b = 2.0 * pot.decay_f(0);
  const double s = static_cast<double>(pot.alphabet().size());
  const double delta = std::exp(-2.0 * b) / (s * s);
  return std::max(delta, std::numeric_limits<double>::min());
}

LemmaCheck lemma_bound_check(const Potential& pot, int n1, int m, const TruncationSpec& trunc,
                             uint64_t cap) {
  if (n1 < 1) fail(errc::invalid_input, "lemma_bound_check: n1 must be >= 1");
  if (m < 0) fail(errc::invalid_input, "lemma_bound_check: m must be >= 0");
  const int R = trunc.radius;
  const int q = pot.alphabet().size();
  const Interval volume(-n1, n1);
  const Interval window = volume.expand(R);

  // Boundary sites visible to the truncated measure, ascending.
  std::vector<int> sites;
  for (int x = -n1 - R; x <= -n1 - 1; ++x) sites.push_back(x);
  for (int x = n1 + 1; x <= n1 + R; ++x) sites.push_back(x);
  const int nb = static_cast<int>(sites.size());

  std::vector<size_t> shared, free_slots;
  for (int t = 0; t < nb; ++t) {
    if (std::abs(sites[static_cast<size_t>(t)]) <= n1 + m)
      shared.push_back(static_cast<size_t>(t));
    else
      free_slots.push_back(static_cast<size_t>(t));
  }

  long double combos = 1.0L;
  for (size_t j = 0; j < shared.size() + 2 * free_slots.size(); ++j) combos *= q;
  if (combos > static_cast<long double>(cap))
    fail(errc::cap_exceeded,
         "enumeration-too-large: boundary-pair enumeration needs " +
             std::to_string(static_cast<double>(combos)) + " cases, cap is " +
             std::to_string(cap));

  // Pair-marginal table per visible boundary assignment.
  uint64_t total = 1;
  for (int t = 0; t < nb; ++t) total *= static_cast<uint64_t>(q);
  std::vector<uint64_t> stride(static_cast<size_t>(nb), 1);
  for (int t = nb - 2; t >= 0; --t)
    stride[static_cast<size_t>(t)] = stride[static_cast<size_t>(t) + 1] * static_cast<uint64_t>(q);

  std::vector<std::vector<double>> marg;
  marg.reserve(static_cast<size_t>(total));
  std::vector<Sym> bsyms(static_cast<size_t>(nb));
  for (uint64_t idx = 0; idx < total; ++idx) {
    uint64_t rem = idx;
    for (int t = 0; t < nb; ++t) {
      bsyms[static_cast<size_t>(t)] = static_cast<Sym>(rem / stride[static_cast<size_t>(t)]);
      rem %= stride[static_cast<size_t>(t)];
    }
    std::vector<Sym> vals(static_cast<size_t>(window.size()), 0);
    for (int t = 0; t < nb; ++t)
      vals[static_cast<size_t>(sites[static_cast<size_t>(t)] - window.lo)] =
          bsyms[static_cast<size_t>(t)];
    const FiniteGibbs g =
        compute_finite_gibbs(pot, volume, SpinConfig(window, std::move(vals)), trunc, cap);
    marg.push_back(marginal(g, {-n1, n1}).probs);
  }

  uint64_t shared_count = 1, free_count = 1;
  for (size_t j = 0; j < shared.size(); ++j) shared_count *= static_cast<uint64_t>(q);
  for (size_t j = 0; j < free_slots.size(); ++j) free_count *= static_cast<uint64_t>(q);

  auto compose = [&](uint64_t s_idx, uint64_t f_idx) {
    uint64_t idx = 0;
    for (size_t j = shared.size(); j-- > 0;) {
      idx += (s_idx % static_cast<uint64_t>(q)) * stride[shared[j]];
      s_idx /= static_cast<uint64_t>(q);
    }
    for (size_t j = free_slots.size(); j-- > 0;) {
      idx += (f_idx % static_cast<uint64_t>(q)) * stride[free_slots[j]];
      f_idx /= static_cast<uint64_t>(q);
    }
    return idx;
  };

  LemmaCheck out;
  for (uint64_t s = 0; s < shared_count; ++s)
    for (uint64_t f1 = 0; f1 < free_count; ++f1) {
      const std::vector<double>& a = marg[compose(s, f1)];
      for (uint64_t f2 = f1 + 1; f2 < free_count; ++f2) {
        const std::vector<double>& b = marg[compose(s, f2)];
        for (size_t k = 0; k < a.size(); ++k)
          out.measured_sup = std::max(out.measured_sup, std::abs(a[k] - b[k]));
      }
    }
  out.bound = gamma_m(decay_profile(pot), m);
  out.holds = out.measured_sup <= out.bound + 1e-12;
  return out;
}

MismatchReport mismatch_vs_bound(const Potential& pot, int l,
                                 const std::vector<std::pair<SpinConfig, SpinConfig>>& boundaries,
                                 int runs, uint64_t seed, const TruncationSpec& trunc,
                                 uint64_t cap, const RunSink& sink) {
  if (runs < 1) fail(errc::invalid_input, "mismatch_vs_bound: runs must be >= 1");
  MismatchReport report;
  report.l = l;
  report.runs = runs;
  report.seed = seed;
  report.delta = delta_lower_bound(pot, trunc);
  report.gamma = gamma_table(decay_profile(pot), l);

  const Interval volume(-l, l);
  for (size_t pair_idx = 0; pair_idx < boundaries.size(); ++pair_idx) {
    const auto& [zeta, zeta_prime] = boundaries[pair_idx];
    MismatchRow row;
    row.zeta = zeta;
    row.zeta_prime = zeta_prime;

    const FiniteGibbs g1 = compute_finite_gibbs(pot, volume, zeta, trunc, cap);
    const FiniteGibbs g2 = compute_finite_gibbs(pot, volume, zeta_prime, trunc, cap);
    row.tv_exact = tv_distance(marginal(g1, {0}), marginal(g2, {0}));

    CouplingEngine engine(pot, l, zeta, zeta_prime, trunc, cap);
    int z0 = 0;
    for (int r = 0; r < runs; ++r) {
      PhiloxRng rng(seed, pair_idx * static_cast<uint64_t>(runs) + static_cast<uint64_t>(r));
      const CouplingRun cr = engine.run(rng);
      if (cr.z.back() == 0) ++z0;
      if (sink) sink(pair_idx, static_cast<uint64_t>(r), cr);
    }
    row.p_z0_hat = static_cast<double>(z0) / runs;
    wilson_interval(row.p_z0_hat, runs, &row.p_z0_lo, &row.p_z0_hi);
    row.p_s0_exact = aux_chain_p0(AuxChain{report.gamma, report.delta}, l);

    const double sigma =
        std::sqrt(row.p_s0_exact * (1.0 - row.p_s0_exact) / runs) + 1.0 / runs;
    row.chain_holds =
        row.tv_exact <= row.p_z0_hi + 1e-15 && row.p_z0_hat <= row.p_s0_exact + 3.0 * sigma;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace gibbs1d
