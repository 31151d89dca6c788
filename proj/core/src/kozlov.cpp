#include "gibbs1d/kozlov.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs1d {

namespace {

constexpr double kMassFloor = 1e-300;

/// Pushforward table on support.expand(n) under the all-vacuum boundary,
/// with the strides needed to slice out the two endpoint axes.
struct NuWindow {
  Interval window{0, 0};
  ProbTable nu;
  uint64_t stride_lo = 1;  ///< stride of site support.lo
  uint64_t stride_hi = 1;  ///< stride of site support.hi
};

NuWindow build_window(const Potential& pot, const Channel& ch, Interval support, int n,
                      const TruncationSpec& trunc, uint64_t cap) {
  NuWindow w;
  w.window = support.expand(n);
  const SpinConfig zeta = SpinConfig::constant(w.window.expand(trunc.radius), 0);
  const FiniteGibbs g = compute_finite_gibbs(pot, w.window, zeta, trunc, cap);
  w.nu = pushforward_exact(g, ch);
  const IndexSpace space(w.window, w.nu.q, cap);
  w.stride_lo = space.stride(support.lo - w.window.lo);
  w.stride_hi = space.stride(support.hi - w.window.lo);
  return w;
}

/// Base index of the conditioning event: xi strictly inside the support,
/// vacuum (symbol 0) outside, endpoint slots left at zero.
uint64_t interior_base(const NuWindow& w, Interval support, const SpinConfig& xi) {
  const IndexSpace space(w.window, w.nu.q);
  uint64_t base = 0;
  for (int site = support.lo + 1; site <= support.hi - 1; ++site)
    base += static_cast<uint64_t>(xi.at(site)) * space.stride(site - w.window.lo);
  return base;
}

NuPair pair_from_window(const NuWindow& w, Interval support, const SpinConfig& xi) {
  const int q = w.nu.q;
  const uint64_t base = interior_base(w, support, xi);
  double mass = 0.0;
  double row = 0.0, col = 0.0;
  const Sym a0 = xi.at(support.lo);
  const Sym b0 = xi.at(support.hi);
  for (Sym a = 0; a < q; ++a)
    for (Sym b = 0; b < q; ++b) {
      const double p = w.nu.probs[base + static_cast<uint64_t>(a) * w.stride_lo +
                                  static_cast<uint64_t>(b) * w.stride_hi];
      mass += p;
      if (a == a0) row += p;
      if (b == b0) col += p;
    }
  if (mass < kMassFloor)
    fail(errc::unsupported_constraint,
         "unsupported-constraint: vacuum-conditioned event has no mass");
  const double joint = w.nu.probs[base + static_cast<uint64_t>(a0) * w.stride_lo +
                                  static_cast<uint64_t>(b0) * w.stride_hi];
  return NuPair{row / mass, col / mass, joint / mass};
}

double u_from_pair(const NuPair& p) {
  if (p.p_i < kMassFloor || p.p_j < kMassFloor || p.p_ij < kMassFloor)
    fail(errc::unsupported_constraint,
         "unsupported-constraint: conditional probability vanished in the log-ratio");
  return std::log(p.p_i) + std::log(p.p_j) - std::log(p.p_ij);
}

double singleton_u(const NuWindow& w, Interval support, Sym x) {
  const int q = w.nu.q;
  double mass = 0.0;
  for (Sym a = 0; a < q; ++a) mass += w.nu.probs[static_cast<uint64_t>(a) * w.stride_lo];
  const double p = w.nu.probs[static_cast<uint64_t>(x) * w.stride_lo];
  (void)support;
  if (mass < kMassFloor || p < kMassFloor)
    fail(errc::unsupported_constraint,
         "unsupported-constraint: vacuum-conditioned singleton has no mass");
  return -std::log(p / mass);
}

}  // namespace

NuPair nu_conditional_pair(const Potential& pot, const Channel& ch, Interval support,
                           const SpinConfig& xi, int n, const TruncationSpec& trunc,
                           uint64_t cap) {
  if (support.diameter() < 1)
    fail(errc::invalid_input, "nu_conditional_pair: support diameter must be >= 1");
  if (n < 1) fail(errc::invalid_input, "nu_conditional_pair: window radius must be >= 1");
  const SpinConfig xi_res = restrict_to(xi, support);
  xi_res.validate_against(channel_target(ch));
  const NuWindow w = build_window(pot, ch, support, n, trunc, cap);
  return pair_from_window(w, support, xi_res);
}

KozlovEstimate kozlov_U(const Potential& pot, const Channel& ch, Interval support,
                        const SpinConfig& xi, int n, const TruncationSpec& trunc, uint64_t cap) {
  if (n < 1) fail(errc::invalid_input, "kozlov_U: window radius must be >= 1");
  const SpinConfig xi_res = restrict_to(xi, support);
  xi_res.validate_against(channel_target(ch));

  auto value_at = [&](int radius) {
    const NuWindow w = build_window(pot, ch, support, radius, trunc, cap);
    if (support.diameter() == 0) return singleton_u(w, support, xi_res.at(support.lo));
    return u_from_pair(pair_from_window(w, support, xi_res));
  };
  KozlovEstimate est;
  est.support = support;
  est.xi = xi_res;
  est.n = n;
  est.value = value_at(n);
  const int half = (n + 1) / 2;
  est.window_delta = half == n ? 0.0 : std::abs(est.value - value_at(half));
  return est;
}

KozlovScan decay_scan(const Potential& pot, const Channel& ch, int max_diameter, int n,
                      const TruncationSpec& trunc, uint64_t cap) {
  if (max_diameter < 1) fail(errc::invalid_input, "decay_scan: max diameter must be >= 1");
  if (n < 1) fail(errc::invalid_input, "decay_scan: window radius must be >= 1");
  const int qt = channel_target(ch).size();
  const int half = (n + 1) / 2;

  KozlovScan scan;
  scan.n = n;
  scan.points.reserve(static_cast<size_t>(max_diameter));
  for (int d = 1; d <= max_diameter; ++d) {
    const Interval support(0, d);
    const NuWindow full = build_window(pot, ch, support, n, trunc, cap);
    const NuWindow halfw =
        half == n ? full : build_window(pot, ch, support, half, trunc, cap);

    const IndexSpace xi_space(support, qt, cap);
    KozlovPoint point;
    point.diameter = d;
    std::vector<Sym> syms;
    for (uint64_t idx = 0; idx < xi_space.count; ++idx) {
      xi_space.decode(idx, syms);
      const SpinConfig xi(support, syms);
      const double u = u_from_pair(pair_from_window(full, support, xi));
      if (std::abs(u) >= point.sup_abs_u) {
        point.sup_abs_u = std::abs(u);
        point.u_at_argmax = u;
        point.argmax_xi = xi;
        const double u_half = u_from_pair(pair_from_window(halfw, support, xi));
        point.window_delta = std::abs(u - u_half);
      }
    }
    scan.points.push_back(std::move(point));
  }
  return scan;
}

DecayFit fit_decay(const KozlovScan& scan, DecayModel model) {
  std::vector<std::pair<double, double>> pts;  // (x, log sup)
  int d_min = 0, d_max = 0;
  for (const KozlovPoint& p : scan.points) {
    if (p.diameter < 2) continue;  // the smallest diameter carries the largest correction
    if (p.sup_abs_u <= 1e-13) continue;
    if (p.window_delta >= 0.1 * p.sup_abs_u) continue;
    const double x = model == DecayModel::exponential ? static_cast<double>(p.diameter)
                                                      : std::log(static_cast<double>(p.diameter));
    pts.emplace_back(x, std::log(p.sup_abs_u));
    if (d_min == 0) d_min = p.diameter;
    d_max = p.diameter;
  }
  if (pts.size() < 4)
    fail(errc::fit_degenerate,
         "fit-degenerate: only " + std::to_string(pts.size()) +
             " usable scan points (need >= 4: diameter >= 2, sup > 1e-13, window_delta under "
             "10% of sup)");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    fail(errc::fit_degenerate, "fit-degenerate: scan diameters are collinear in x");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;

  DecayFit fit;
  fit.model = model;
  fit.rate = -slope;
  fit.log_c = intercept;
  fit.points_used = static_cast<int>(pts.size());
  fit.d_min = d_min;
  fit.d_max = d_max;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (intercept + slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

ContinuityRate continuity_rate(const Potential& pot, const Channel& ch, int i,
                               const std::vector<int>& n_values,
                               const std::vector<SpinConfig>& tails, const TruncationSpec& trunc,
                               uint64_t cap) {
  if (n_values.empty()) fail(errc::invalid_input, "continuity_rate: need at least one n");
  if (tails.size() < 2) fail(errc::invalid_input, "continuity_rate: need at least two tails");
  const int qt = channel_target(ch).size();

  ContinuityRate out;
  out.n = n_values;
  out.phi.reserve(n_values.size());
  for (int n : n_values) {
    if (n < 1) fail(errc::invalid_input, "continuity_rate: window radius must be >= 1");
    const Interval window(i - n, i + n);
    const IndexSpace space(window, qt, cap);
    const uint64_t stride = space.stride(n);  // site i sits at the window center

    // Probe configurations: constant extremes and the two alternating
    // extreme-symbol patterns.
    std::vector<std::vector<Sym>> probes;
    probes.push_back(std::vector<Sym>(static_cast<size_t>(window.size()), 0));
    probes.push_back(std::vector<Sym>(static_cast<size_t>(window.size()), qt - 1));
    std::vector<Sym> alt(static_cast<size_t>(window.size()));
    for (int k = 0; k < window.size(); ++k) alt[static_cast<size_t>(k)] = k % 2 == 0 ? 0 : qt - 1;
    probes.push_back(alt);
    for (int k = 0; k < window.size(); ++k) alt[static_cast<size_t>(k)] = k % 2 == 0 ? qt - 1 : 0;
    probes.push_back(std::move(alt));

    // One pushforward per tail, then every probe is a strided lookup.
    std::vector<ProbTable> tables;
    tables.reserve(tails.size());
    for (const SpinConfig& tail : tails) {
      const FiniteGibbs g = compute_finite_gibbs(pot, window, tail, trunc, cap);
      tables.push_back(pushforward_exact(g, ch));
    }

    double phi = 0.0;
    for (const auto& probe : probes) {
      const uint64_t idx = space.encode(probe);
      const uint64_t base = idx - static_cast<uint64_t>(probe[static_cast<size_t>(n)]) * stride;
      double lo = 2.0, hi = -1.0;
      for (const ProbTable& nu : tables) {
        double mass = 0.0;
        for (Sym x = 0; x < qt; ++x) mass += nu.probs[base + static_cast<uint64_t>(x) * stride];
        if (mass < kMassFloor) continue;
        const double c = nu.probs[idx] / mass;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      if (hi >= lo) phi = std::max(phi, hi - lo);
    }
    out.phi.push_back(phi);
  }
  return out;
}

}  // namespace gibbs1d
