#include "gibbs1d/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gibbs1d/io.hpp"

namespace gibbs1d {

SiteKernel::SiteKernel(Alphabet source, Alphabet target, std::vector<std::vector<double>> rows)
    : source_(std::move(source)), target_(std::move(target)), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != source_.size())
    fail(errc::invalid_input, "SiteKernel: one row per source symbol required");
  min_entry_ = 2.0;
  for (const auto& row : rows_) {
    if (static_cast<int>(row.size()) != target_.size())
      fail(errc::invalid_input, "SiteKernel: row length does not match target alphabet");
    double sum = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0)
        fail(errc::invalid_input, "SiteKernel: entries must be finite and nonnegative");
      sum += p;
      min_entry_ = std::min(min_entry_, p);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      fail(errc::invalid_input, "SiteKernel: row sums must equal 1 within 1e-12");
  }
  strictly_positive_ = min_entry_ > 0.0;
}

double SiteKernel::log_bound() const {
  if (!strictly_positive_)
    fail(errc::model_condition,
         "SiteKernel: log bound requires a strictly positive kernel (a zero entry makes "
         "-log P unbounded)");
  return -std::log(min_entry_);
}

DetMap::DetMap(Alphabet source, Alphabet target, std::vector<Sym> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  if (static_cast<int>(image_.size()) != source_.size())
    fail(errc::invalid_input, "DetMap: one image symbol per source symbol required");
  preimages_.resize(static_cast<size_t>(target_.size()));
  for (Sym s = 0; s < source_.size(); ++s) {
    Sym t = image_[static_cast<size_t>(s)];
    if (t < 0 || t >= target_.size())
      fail(errc::invalid_input, "DetMap: image symbol out of target alphabet range");
    preimages_[static_cast<size_t>(t)].push_back(s);
  }
  for (Sym t = 0; t < target_.size(); ++t)
    if (preimages_[static_cast<size_t>(t)].empty())
      fail(errc::invalid_input,
           "DetMap: map must be surjective; target symbol '" + target_.name(t) + "' is never hit");
}

SiteKernel DetMap::as_kernel() const {
  std::vector<std::vector<double>> rows(static_cast<size_t>(source_.size()),
                                        std::vector<double>(static_cast<size_t>(target_.size()), 0.0));
  for (Sym s = 0; s < source_.size(); ++s)
    rows[static_cast<size_t>(s)][static_cast<size_t>(image_[static_cast<size_t>(s)])] = 1.0;
  return SiteKernel(source_, target_, std::move(rows));
}

const Alphabet& channel_source(const Channel& ch) {
  return std::visit([](const auto& c) -> const Alphabet& { return c.source(); }, ch);
}

const Alphabet& channel_target(const Channel& ch) {
  return std::visit([](const auto& c) -> const Alphabet& { return c.target(); }, ch);
}

SiteKernel channel_as_kernel(const Channel& ch) {
  if (const auto* k = std::get_if<SiteKernel>(&ch)) return *k;
  return std::get<DetMap>(ch).as_kernel();
}

ProbTable pushforward_exact(const FiniteGibbs& g, const Channel& ch) {
  const SiteKernel kernel = channel_as_kernel(ch);
  if (!(kernel.source() == g.alphabet))
    fail(errc::invalid_input, "pushforward: channel source alphabet does not match the measure");
  const int n = g.volume.size();
  const int q = g.alphabet.size();
  const int qt = kernel.target().size();

  // Contract one site axis at a time: after step p the leading p axes index
  // target symbols, the rest still index source symbols.
  std::vector<double> cur = g.probs;
  std::vector<double> next;
  uint64_t suffix = cur.size();
  uint64_t prefix = 1;
  for (int p = 0; p < n; ++p) {
    suffix /= static_cast<uint64_t>(q);
    next.assign(prefix * static_cast<uint64_t>(qt) * suffix, 0.0);
    for (uint64_t a = 0; a < prefix; ++a) {
      for (Sym s = 0; s < q; ++s) {
        const double* src = cur.data() + (a * static_cast<uint64_t>(q) + static_cast<uint64_t>(s)) * suffix;
        for (Sym x = 0; x < qt; ++x) {
          const double w = kernel.prob(x, s);
          if (w == 0.0) continue;
          double* dst = next.data() + (a * static_cast<uint64_t>(qt) + static_cast<uint64_t>(x)) * suffix;
          for (uint64_t j = 0; j < suffix; ++j) dst[j] += w * src[j];
        }
      }
    }
    cur.swap(next);
    prefix *= static_cast<uint64_t>(qt);
  }

  ProbTable out;
  out.sites.reserve(static_cast<size_t>(n));
  for (int site = g.volume.lo; site <= g.volume.hi; ++site) out.sites.push_back(site);
  out.q = qt;
  out.probs = std::move(cur);
  return out;
}

ConditionalScan bruteforce_conditional_scan(const Potential& pot, const Channel& ch, int n,
                                            const SpinConfig& zeta, const TruncationSpec& trunc,
                                            uint64_t cap) {
  if (n < 1) fail(errc::invalid_input, "conditional scan: n must be >= 1");
  const Interval volume(-n, n);
  const FiniteGibbs g = compute_finite_gibbs(pot, volume, zeta, trunc, cap);
  const ProbTable nu = pushforward_exact(g, ch);
  const int qt = nu.q;

  ConditionalScan scan;
  scan.window = volume;
  scan.q_target = qt;
  scan.value.assign(nu.probs.size(), std::numeric_limits<double>::quiet_NaN());
  scan.supported.assign(nu.probs.size(), 0);

  // Site 0 sits at position n of 2n+1; its stride is qt^n.
  uint64_t stride = 1;
  for (int j = 0; j < n; ++j) stride *= static_cast<uint64_t>(qt);
  const uint64_t block = stride * static_cast<uint64_t>(qt);
  for (uint64_t hi = 0; hi < nu.probs.size(); hi += block) {
    for (uint64_t lo = 0; lo < stride; ++lo) {
      double mass = 0.0;
      for (Sym x = 0; x < qt; ++x) mass += nu.probs[hi + static_cast<uint64_t>(x) * stride + lo];
      if (mass < 1e-300) continue;
      for (Sym x = 0; x < qt; ++x) {
        const uint64_t idx = hi + static_cast<uint64_t>(x) * stride + lo;
        scan.value[idx] = nu.probs[idx] / mass;
        scan.supported[idx] = 1;
      }
    }
  }
  return scan;
}

double transformed_conditional_bruteforce(const Potential& pot, const Channel& ch, int n,
                                          const SpinConfig& xi, const SpinConfig& zeta,
                                          const TruncationSpec& trunc, uint64_t cap) {
  if (n < 1) fail(errc::invalid_input, "transformed conditional: n must be >= 1");
  const Interval volume(-n, n);
  const SpinConfig xi_res = restrict_to(xi, volume);
  xi_res.validate_against(channel_target(ch));
  const FiniteGibbs g = compute_finite_gibbs(pot, volume, zeta, trunc, cap);
  const ProbTable nu = pushforward_exact(g, ch);
  const uint64_t idx = nu.index_of(xi_res.values());

  uint64_t stride = 1;
  for (int j = 0; j < n; ++j) stride *= static_cast<uint64_t>(nu.q);
  const uint64_t base = idx - static_cast<uint64_t>(xi_res.at(0)) * stride;
  double mass = 0.0;
  for (Sym x = 0; x < nu.q; ++x) mass += nu.probs[base + static_cast<uint64_t>(x) * stride];
  if (mass < 1e-300)
    fail(errc::unsupported_constraint,
         "unsupported-constraint: conditioning configuration has no mass under the channel");
  return nu.probs[idx] / mass;
}

Potential modified_potential(const Potential& pot, const SiteKernel& k, const SpinConfig& xi) {
  if (!k.strictly_positive())
    fail(errc::model_condition,
         "first-layer reweighting requires a strictly positive kernel (zero entries make the "
         "singleton adjustment infinite)");
  if (!(k.source() == pot.alphabet()))
    fail(errc::invalid_input, "modified potential: kernel source alphabet does not match");
  xi.validate_against(k.target());
  std::map<int, std::vector<double>> add;
  for (int site = xi.window().lo; site <= xi.window().hi; ++site) {
    std::vector<double> vals(static_cast<size_t>(k.source().size()));
    for (Sym s = 0; s < k.source().size(); ++s)
      vals[static_cast<size_t>(s)] = -std::log(k.prob(xi.at(site), s));
    add[site] = std::move(vals);
  }
  return pot.with_site_terms(std::move(add));
}

double transformed_conditional_firstlayer_stochastic(const Potential& pot, const SiteKernel& k,
                                                     int n, const SpinConfig& xi,
                                                     const SpinConfig& zeta,
                                                     const TruncationSpec& trunc, uint64_t cap) {
  if (n < 1) fail(errc::invalid_input, "transformed conditional: n must be >= 1");
  const Interval volume(-n, n);
  const SpinConfig xi_res = restrict_to(xi, volume);
  const Potential modified = modified_potential(pot, k, xi_res);
  const FiniteGibbs g = compute_finite_gibbs(modified, volume, zeta, trunc, cap);

  const int q = g.alphabet.size();
  std::vector<double> inv(static_cast<size_t>(q));
  for (Sym s = 0; s < q; ++s) inv[static_cast<size_t>(s)] = 1.0 / k.prob(xi_res.at(0), s);

  uint64_t stride = 1;
  for (int j = 0; j < n; ++j) stride *= static_cast<uint64_t>(q);
  const uint64_t block = stride * static_cast<uint64_t>(q);
  double expectation = 0.0;
  for (uint64_t hi = 0; hi < g.probs.size(); hi += block)
    for (Sym s = 0; s < q; ++s) {
      const double w = inv[static_cast<size_t>(s)];
      const double* src = g.probs.data() + hi + static_cast<uint64_t>(s) * stride;
      double acc = 0.0;
      for (uint64_t lo = 0; lo < stride; ++lo) acc += src[lo];
      expectation += w * acc;
    }
  return 1.0 / expectation;
}

std::vector<Sym> ConstrainedFirstLayer::decode(uint64_t index) const {
  std::vector<Sym> syms(allowed.size());
  for (size_t k = allowed.size(); k-- > 0;) {
    const uint64_t radix = allowed[k].size();
    syms[k] = allowed[k][static_cast<size_t>(index % radix)];
    index /= radix;
  }
  return syms;
}

ConstrainedFirstLayer constrained_first_layer(const Potential& pot, const DetMap& map,
                                              Interval volume, const SpinConfig& zeta,
                                              const SpinConfig& eta, const TruncationSpec& trunc,
                                              uint64_t cap) {
  if (!volume.contains(0))
    fail(errc::invalid_input, "constrained first layer: volume must contain the origin");
  if (!eta.window().contains(volume))
    fail(errc::invalid_input, "constrained first layer: eta must cover the volume");
  eta.validate_against(map.target());

  ConstrainedFirstLayer out;
  out.volume = volume;
  out.allowed.reserve(static_cast<size_t>(volume.size()));
  for (int site = volume.lo; site <= volume.hi; ++site) {
    if (site == 0) {
      // Placeholder: the origin is never read under the origin-free scope.
      out.allowed.push_back({Sym{0}});
    } else {
      out.allowed.push_back(map.preimages(eta.at(site)));
    }
  }
  const std::vector<double> weights = negative_hamiltonians(
      pot, volume, zeta, trunc, IntervalScope::excluding_origin, &out.allowed, cap);
  out.log_n = log_sum_exp(weights);
  out.probs.resize(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) out.probs[i] = std::exp(weights[i] - out.log_n);
  return out;
}

PsiPhi psi_phi_zero(const Potential& pot, const DetMap& map, Interval volume,
                    const SpinConfig& sigma, const SpinConfig& zeta, Sym eta0,
                    const TruncationSpec& trunc) {
  if (!volume.contains(0)) fail(errc::invalid_input, "psi/phi: volume must contain the origin");
  if (eta0 < 0 || eta0 >= map.target().size())
    fail(errc::invalid_input, "psi/phi: eta0 outside target alphabet");
  if (!zeta.window().contains(volume.expand(trunc.radius)))
    fail(errc::invalid_input,
         "boundary-window: zeta must cover the volume expanded by the truncation radius");
  const SpinConfig cover = patch(restrict_to(sigma, volume), restrict_to(zeta, volume.expand(trunc.radius)));

  PsiPhi out;
  std::vector<Sym> vals = cover.values();
  const size_t origin_slot = static_cast<size_t>(-cover.window().lo);
  for (Sym s0 = 0; s0 < pot.alphabet().size(); ++s0) {
    vals[origin_slot] = s0;
    const SpinConfig cover0(cover.window(), vals);
    const double h0 = hamiltonian(pot, Interval(0, 0), SpinConfig(Interval(0, 0), {s0}), cover0,
                                  trunc, IntervalScope::all);
    const double w = std::exp(-h0);
    out.phi += w;
    if (map.apply(s0) == eta0) out.psi += w;
  }
  return out;
}

double transformed_conditional_firstlayer_deterministic(const Potential& pot, const DetMap& map,
                                                        int n, const SpinConfig& eta,
                                                        const SpinConfig& zeta,
                                                        const TruncationSpec& trunc, uint64_t cap) {
  if (n < 1) fail(errc::invalid_input, "transformed conditional: n must be >= 1");
  const Interval volume(-n, n);
  const ConstrainedFirstLayer layer = constrained_first_layer(pot, map, volume, zeta, eta, trunc, cap);
  const Sym eta0 = restrict_to(eta, volume).at(0);

  double num = 0.0, den = 0.0;
  for (uint64_t i = 0; i < layer.probs.size(); ++i) {
    const SpinConfig sigma(volume, layer.decode(i));
    const PsiPhi pp = psi_phi_zero(pot, map, volume, sigma, zeta, eta0, trunc);
    num += layer.probs[i] * pp.psi;
    den += layer.probs[i] * pp.phi;
  }
  return num / den;
}

double eta_consistency_check(const Potential& pot, const DetMap& map, Interval inner,
                             Interval outer, const SpinConfig& zeta, const SpinConfig& eta,
                             const TruncationSpec& trunc) {
  if (!outer.contains(inner) || !inner.contains(0))
    fail(errc::invalid_input, "eta consistency: need origin in inner and inner inside outer");
  const ConstrainedFirstLayer big = constrained_first_layer(pot, map, outer, zeta, eta, trunc);

  // Split outer's sites into the inner block and the rest; marginalize the
  // big measure onto the rest, then compare against rest-conditioned inner
  // measures assignment by assignment.
  const int nsites = outer.size();
  std::vector<int> rest_slots;
  for (int k = 0; k < nsites; ++k)
    if (!inner.contains(outer.lo + k)) rest_slots.push_back(k);

  uint64_t rest_count = 1;
  for (int k : rest_slots) rest_count *= big.allowed[static_cast<size_t>(k)].size();

  std::vector<double> rest_marginal(rest_count, 0.0);
  std::vector<Sym> syms;
  auto rest_key = [&](const std::vector<Sym>& full) {
    uint64_t key = 0;
    for (int k : rest_slots) {
      const auto& list = big.allowed[static_cast<size_t>(k)];
      const size_t pos = static_cast<size_t>(
          std::find(list.begin(), list.end(), full[static_cast<size_t>(k)]) - list.begin());
      key = key * list.size() + pos;
    }
    return key;
  };
  for (uint64_t i = 0; i < big.probs.size(); ++i)
    rest_marginal[rest_key(big.decode(i))] += big.probs[i];

  std::map<uint64_t, ConstrainedFirstLayer> inner_cache;
  double dev = 0.0;
  for (uint64_t i = 0; i < big.probs.size(); ++i) {
    syms = big.decode(i);
    const uint64_t key = rest_key(syms);
    auto it = inner_cache.find(key);
    if (it == inner_cache.end()) {
      // Boundary for the inner volume: the rest of outer from this
      // assignment, everything else from zeta.
      std::vector<Sym> bvals = restrict_to(zeta, outer.expand(trunc.radius)).values();
      for (int k : rest_slots)
        bvals[static_cast<size_t>(outer.lo + k - (outer.lo - trunc.radius))] = syms[static_cast<size_t>(k)];
      const SpinConfig boundary(outer.expand(trunc.radius), std::move(bvals));
      it = inner_cache.emplace(key, constrained_first_layer(pot, map, inner, boundary, eta, trunc)).first;
    }
    const ConstrainedFirstLayer& small = it->second;
    uint64_t inner_idx = 0;
    for (int k = 0; k < inner.size(); ++k) {
      const auto& list = small.allowed[static_cast<size_t>(k)];
      const size_t pos = static_cast<size_t>(
          std::find(list.begin(), list.end(), syms[static_cast<size_t>(inner.lo - outer.lo + k)]) -
          list.begin());
      inner_idx = inner_idx * list.size() + pos;
    }
    dev = std::max(dev, std::abs(big.probs[i] - rest_marginal[key] * small.probs[inner_idx]));
  }
  return dev;
}

LocalApproxError local_approximation_error(const Potential& pot, const DetMap& map, int k,
                                           const TruncationSpec& trunc) {
  if (k < 1) fail(errc::invalid_input, "local approximation: k must be >= 1");
  const int R = trunc.radius;
  const int q = pot.alphabet().size();
  const int c = std::min(k, 3);
  // The probes must hold the core, the filler out to 2k, and one tail site;
  // psi/phi themselves only ever read [-R, R] of it.
  const int w = std::max(R, 2 * k + 1);
  const Interval win(-w, w);

  // Probe family: exhaustive core on [-c,c] away from the origin, constant
  // filler between the core and radius r, constant tail beyond r. The
  // extreme symbols serve as filler/tail representatives.
  std::vector<Sym> edge = {0, q - 1};
  LocalApproxError out;
  uint64_t cores = 1;
  for (int j = 0; j < 2 * c; ++j) cores *= static_cast<uint64_t>(q);

  std::vector<Sym> vals(static_cast<size_t>(win.size()), 0);
  auto fill = [&](uint64_t core_idx, Sym rho, Sym tau, int r) {
    uint64_t rem = core_idx;
    for (int x = win.lo; x <= win.hi; ++x) {
      Sym s;
      const int ax = std::abs(x);
      if (x == 0) {
        s = 0;  // summed out by psi/phi
      } else if (ax <= c) {
        s = 0;  // set below from core_idx
      } else if (ax <= r) {
        s = rho;
      } else {
        s = tau;
      }
      vals[static_cast<size_t>(x - win.lo)] = s;
    }
    // Core symbols, site ascending, last site fastest.
    std::vector<Sym> core(2 * static_cast<size_t>(c));
    for (size_t j = core.size(); j-- > 0;) {
      core[j] = static_cast<Sym>(rem % static_cast<uint64_t>(q));
      rem /= static_cast<uint64_t>(q);
    }
    size_t ci = 0;
    for (int x = -c; x <= c; ++x) {
      if (x == 0) continue;
      vals[static_cast<size_t>(x - win.lo)] = core[ci++];
    }
  };

  const SpinConfig origin_placeholder(Interval(0, 0), {0});
  for (uint64_t core_idx = 0; core_idx < cores; ++core_idx)
    for (Sym rho : edge)
      for (Sym tau : edge)
        for (Sym eta0 = 0; eta0 < map.target().size(); ++eta0) {
          fill(core_idx, rho, tau, k);
          const SpinConfig near(win, vals);
          const PsiPhi a = psi_phi_zero(pot, map, Interval(0, 0), origin_placeholder, near, eta0, trunc);
          fill(core_idx, rho, tau, 2 * k);
          const SpinConfig far(win, vals);
          const PsiPhi b = psi_phi_zero(pot, map, Interval(0, 0), origin_placeholder, far, eta0, trunc);
          out.psi_err = std::max(out.psi_err, std::abs(a.psi - b.psi));
          out.phi_err = std::max(out.phi_err, std::abs(a.phi - b.phi));
        }
  return out;
}

}  // namespace gibbs1d
