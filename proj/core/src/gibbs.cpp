#include "gibbs1d/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gibbs1d/io.hpp"

namespace gibbs1d {

namespace {

constexpr double kMinConditioningMass = 1e-300;

std::vector<uint64_t> site_strides(const std::vector<int>& sites, int q) {
  std::vector<uint64_t> strides(sites.size());
  uint64_t s = 1;
  for (size_t k = sites.size(); k-- > 0;) {
    strides[k] = s;
    s *= static_cast<uint64_t>(q);
  }
  return strides;
}

}  // namespace

uint64_t ProbTable::index_of(const std::vector<Sym>& syms) const {
  if (syms.size() != sites.size())
    fail(errc::invalid_input, "ProbTable: symbol count does not match site count");
  uint64_t idx = 0;
  for (Sym s : syms) {
    if (s < 0 || s >= q) fail(errc::invalid_input, "ProbTable: symbol outside alphabet");
    idx = idx * static_cast<uint64_t>(q) + static_cast<uint64_t>(s);
  }
  return idx;
}

FiniteGibbs compute_finite_gibbs(const Potential& pot, Interval volume, const SpinConfig& zeta,
                                 const TruncationSpec& trunc, uint64_t cap) {
  std::vector<double> logw =
      negative_hamiltonians(pot, volume, zeta, trunc, IntervalScope::all, nullptr, cap);
  const double log_z = log_sum_exp(logw);
  std::vector<double> probs(logw.size());
  for (size_t i = 0; i < logw.size(); ++i) probs[i] = std::exp(logw[i] - log_z);
  FiniteGibbs g{volume,  pot.alphabet(), zeta, trunc, log_z,
                volume.size() * trunc.per_site_tail, std::move(probs)};
  return g;
}

ProbTable marginal(const FiniteGibbs& g, const std::vector<int>& sites) {
  if (sites.empty()) fail(errc::invalid_input, "marginal: empty site list");
  for (size_t k = 0; k < sites.size(); ++k) {
    if (!g.volume.contains(sites[k]))
      fail(errc::invalid_input, "marginal: site " + std::to_string(sites[k]) + " outside volume");
    if (k > 0 && sites[k] <= sites[k - 1])
      fail(errc::invalid_input, "marginal: sites must be strictly ascending");
  }
  const IndexSpace space = g.space();
  const int q = space.q;
  std::vector<uint64_t> full_strides(static_cast<size_t>(space.nsites));
  for (int k = 0; k < space.nsites; ++k) full_strides[static_cast<size_t>(k)] = space.stride(k);

  ProbTable out;
  out.sites = sites;
  out.q = q;
  out.probs.assign(static_cast<size_t>(std::pow(double(q), double(sites.size())) + 0.5), 0.0);
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    uint64_t sub = 0;
    for (int site : sites) {
      const uint64_t stride = full_strides[static_cast<size_t>(site - g.volume.lo)];
      sub = sub * static_cast<uint64_t>(q) + (idx / stride) % static_cast<uint64_t>(q);
    }
    out.probs[sub] += g.probs[idx];
  }
  return out;
}

ProbTable conditional(const FiniteGibbs& g, const std::vector<std::pair<int, Sym>>& fixed) {
  const IndexSpace space = g.space();
  const int q = space.q;
  std::vector<std::optional<Sym>> pin(static_cast<size_t>(space.nsites));
  for (const auto& [site, sym] : fixed) {
    if (!g.volume.contains(site))
      fail(errc::invalid_input, "conditional: site " + std::to_string(site) + " outside volume");
    if (sym < 0 || sym >= q) fail(errc::invalid_input, "conditional: symbol outside alphabet");
    auto& slot = pin[static_cast<size_t>(site - g.volume.lo)];
    if (slot.has_value()) fail(errc::invalid_input, "conditional: duplicate site");
    slot = sym;
  }
  std::vector<int> remaining;
  for (int site = g.volume.lo; site <= g.volume.hi; ++site)
    if (!pin[static_cast<size_t>(site - g.volume.lo)].has_value()) remaining.push_back(site);

  ProbTable out;
  out.sites = remaining;
  out.q = q;
  out.probs.assign(static_cast<size_t>(std::pow(double(q), double(remaining.size())) + 0.5), 0.0);

  std::vector<Sym> syms;
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    space.decode(idx, syms);
    bool match = true;
    for (int k = 0; k < space.nsites && match; ++k) {
      const auto& slot = pin[static_cast<size_t>(k)];
      if (slot.has_value() && *slot != syms[static_cast<size_t>(k)]) match = false;
    }
    if (!match) continue;
    uint64_t sub = 0;
    for (int site : remaining)
      sub = sub * static_cast<uint64_t>(q) +
            static_cast<uint64_t>(syms[static_cast<size_t>(site - g.volume.lo)]);
    out.probs[sub] += g.probs[idx];
  }
  double mass = 0.0;
  for (double p : out.probs) mass += p;
  if (mass < kMinConditioningMass)
    fail(errc::unsupported_constraint, "unsupported-constraint: conditioning event has no mass");
  for (double& p : out.probs) p /= mass;
  return out;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) fail(errc::invalid_input, "tv_distance: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double tv_distance(const ProbTable& p, const ProbTable& q) {
  if (p.sites != q.sites || p.q != q.q)
    fail(errc::invalid_input, "tv_distance: tables over different supports");
  return tv_distance(p.probs, q.probs);
}

double dlr_check(const Potential& pot, Interval inner, Interval outer, const SpinConfig& zeta,
                 const TruncationSpec& trunc) {
  if (!outer.contains(inner)) fail(errc::invalid_input, "dlr_check: inner must lie inside outer");
  const FiniteGibbs g = compute_finite_gibbs(pot, outer, zeta, trunc);
  const IndexSpace space = g.space();
  const int q = space.q;

  std::vector<int> out_sites;
  for (int site = outer.lo; site <= outer.hi; ++site)
    if (!inner.contains(site)) out_sites.push_back(site);
  if (out_sites.empty()) return 0.0;  // identical volumes: identity holds trivially

  const ProbTable marg = marginal(g, out_sites);
  const std::vector<uint64_t> out_strides = site_strides(out_sites, q);
  const IndexSpace inner_space(inner, q);

  std::vector<std::optional<FiniteGibbs>> cache(marg.probs.size());
  std::vector<Sym> syms;
  double worst = 0.0;
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    space.decode(idx, syms);
    uint64_t out_idx = 0;
    for (int site : out_sites)
      out_idx = out_idx * static_cast<uint64_t>(q) +
                static_cast<uint64_t>(syms[static_cast<size_t>(site - outer.lo)]);
    auto& slot = cache[out_idx];
    if (!slot.has_value()) {
      const SpinConfig tau = space.config_at(idx);
      slot = compute_finite_gibbs(pot, inner, patch(tau, zeta), trunc);
    }
    uint64_t in_idx = 0;
    for (int site = inner.lo; site <= inner.hi; ++site)
      in_idx = in_idx * static_cast<uint64_t>(q) +
               static_cast<uint64_t>(syms[static_cast<size_t>(site - outer.lo)]);
    const double two_step = marg.probs[out_idx] * slot->probs[in_idx];
    worst = std::max(worst, std::abs(two_step - g.probs[idx]));
  }
  return worst;
}

std::string export_csv(const FiniteGibbs& g) {
  std::string out;
  std::vector<std::string> header;
  for (int site = g.volume.lo; site <= g.volume.hi; ++site)
    header.push_back("site_" + std::to_string(site));
  header.push_back("probability");
  out += csv_line(header);

  const IndexSpace space = g.space();
  std::vector<Sym> syms;
  for (uint64_t idx = 0; idx < space.count; ++idx) {
    space.decode(idx, syms);
    std::vector<std::string> row;
    for (Sym s : syms) row.push_back(g.alphabet.name(s));
    row.push_back(format_g17(g.probs[idx]));
    out += csv_line(row);
  }
  return out;
}

}  // namespace gibbs1d
