#pragma once

// Slow reference implementations the fast library paths are checked against.
// Everything here is written as plain nested loops over explicitly listed
// interactions, so a bug in the library's interval enumeration, dense
// indexing, or strided slicing cannot cancel against itself.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "gibbs1d/coupling.hpp"
#include "gibbs1d/gibbs.hpp"
#include "gibbs1d/potential.hpp"
#include "gibbs1d/transform.hpp"

namespace oracles {

using namespace gibbs1d;

inline Alphabet spin_alphabet() { return Alphabet({"+", "-"}, std::vector<double>{1.0, -1.0}); }

inline Potential ising_nn(double coupling) {
  std::vector<std::vector<double>> tables{
      {0.0, 0.0},
      {-coupling, coupling, coupling, -coupling},
  };
  return Potential(spin_alphabet(), {Term::finite_range_table(1, std::move(tables))});
}

inline Potential potts3_nn(double coupling) {
  std::vector<double> d1(9, 0.0);
  for (int s = 0; s < 3; ++s) d1[static_cast<size_t>(s * 3 + s)] = -coupling;
  return Potential(Alphabet({"a", "b", "c"}),
                   {Term::finite_range_table(1, {{0.0, 0.0, 0.0}, d1})});
}

inline Potential exp_pair(double coupling, double rate) {
  return Potential(spin_alphabet(), {Term::exponential_pair(coupling, rate)});
}

inline SiteKernel binary_flip(double eps) {
  Alphabet spins = spin_alphabet();
  return SiteKernel(spins, Alphabet({"0", "1"}), {{1 - eps, eps}, {eps, 1 - eps}});
}

inline DetMap fuzzy_3to2() {
  return DetMap(Alphabet({"a", "b", "c"}), Alphabet({"x", "y"}), {0, 0, 1});
}

/// Symbol at `site` from sigma if inside the volume, else from zeta.
inline Sym cover_at(const SpinConfig& sigma, const SpinConfig& zeta, int site) {
  return sigma.window().contains(site) ? sigma.at(site) : zeta.at(site);
}

/// One interaction term evaluated on the interval [i, j]. Freshly written
/// per-family switch; `look` resolves a site to its symbol.
inline double term_value(const Term& term, int i, int j, const Alphabet& alphabet,
                         const std::function<Sym(int)>& look) {
  const int d = j - i;
  switch (term.family) {
    case Family::exponential_pair:
      if (d < 1) return 0.0;
      return term.coupling * std::exp(-term.rate * d) * alphabet.value(look(i)) *
             alphabet.value(look(j));
    case Family::power_law_pair:
      if (d < 1) return 0.0;
      return term.coupling * std::pow(static_cast<double>(d), -term.exponent) *
             alphabet.value(look(i)) * alphabet.value(look(j));
    case Family::single_site_field:
      if (d != 0) return 0.0;
      return term.coupling * alphabet.value(look(i));
    case Family::finite_range_table: {
      if (d > term.range) return 0.0;
      uint64_t idx = 0;
      for (int site = i; site <= j; ++site)
        idx = idx * static_cast<uint64_t>(alphabet.size()) + static_cast<uint64_t>(look(site));
      return term.tables[static_cast<size_t>(d)][idx];
    }
  }
  return 0.0;
}

/// H over all intervals of diameter <= radius intersecting the volume, with
/// sigma on the volume and zeta outside (zeta covers volume expanded by
/// radius). Includes the per-site singleton adjustments.
inline double slow_hamiltonian(const Potential& pot, Interval volume, const SpinConfig& sigma,
                               const SpinConfig& zeta, int radius) {
  const auto look = [&](int site) { return cover_at(sigma, zeta, site); };
  double h = 0.0;
  for (int lo = volume.lo - radius; lo <= volume.hi; ++lo)
    for (int d = 0; d <= radius; ++d) {
      const int hi = lo + d;
      if (hi < volume.lo) continue;
      for (const Term& term : pot.terms()) h += term_value(term, lo, hi, pot.alphabet(), look);
      if (d == 0 && volume.contains(lo)) {
        auto it = pot.site_terms().find(lo);
        if (it != pot.site_terms().end()) h += it->second[static_cast<size_t>(look(lo))];
      }
    }
  return h;
}

/// exp(-H) normalized, canonical order (own odometer, last site fastest).
inline std::vector<double> slow_gibbs_probs(const Potential& pot, Interval volume,
                                            const SpinConfig& zeta, int radius) {
  const int q = pot.alphabet().size();
  const int n = volume.size();
  std::vector<Sym> syms(static_cast<size_t>(n), 0);
  std::vector<double> weights;
  for (;;) {
    weights.push_back(std::exp(
        -slow_hamiltonian(pot, volume, SpinConfig(volume, syms), zeta, radius)));
    int k = n - 1;
    while (k >= 0 && syms[static_cast<size_t>(k)] == q - 1) syms[static_cast<size_t>(k--)] = 0;
    if (k < 0) break;
    ++syms[static_cast<size_t>(k)];
  }
  double z = 0.0;
  for (double w : weights) z += w;
  for (double& w : weights) w /= z;
  return weights;
}

/// Endpoint-to-endpoint transfer product for strict nearest-neighbour table
/// potentials: marginal of sigma_site on [volume] with boundary symbols
/// zeta(volume.lo - 1), zeta(volume.hi + 1). Independent of any dense
/// configuration enumeration.
inline std::vector<double> transfer_matrix_marginal(const Potential& pot, Interval volume,
                                                    const SpinConfig& zeta, int site) {
  const Alphabet& alphabet = pot.alphabet();
  const int q = alphabet.size();
  const auto look_pair = [&](Sym a, Sym b, int i) {
    double h = 0.0;
    for (const Term& term : pot.terms())
      h += term_value(term, i, i + 1, alphabet, [&](int s) { return s == i ? a : b; });
    return h;
  };
  const auto look_site = [&](Sym a, int i) {
    double h = 0.0;
    for (const Term& term : pot.terms())
      h += term_value(term, i, i, alphabet, [&](int) { return a; });
    return h;
  };

  std::vector<std::vector<double>> fwd(static_cast<size_t>(volume.size()),
                                       std::vector<double>(static_cast<size_t>(q)));
  for (Sym s = 0; s < q; ++s)
    fwd[0][static_cast<size_t>(s)] =
        std::exp(-look_pair(zeta.at(volume.lo - 1), s, volume.lo - 1) - look_site(s, volume.lo));
  for (int i = volume.lo + 1; i <= volume.hi; ++i) {
    const size_t k = static_cast<size_t>(i - volume.lo);
    for (Sym t = 0; t < q; ++t) {
      double acc = 0.0;
      for (Sym s = 0; s < q; ++s)
        acc += fwd[k - 1][static_cast<size_t>(s)] *
               std::exp(-look_pair(s, t, i - 1) - look_site(t, i));
      fwd[k][static_cast<size_t>(t)] = acc;
    }
  }

  std::vector<std::vector<double>> bwd(static_cast<size_t>(volume.size()),
                                       std::vector<double>(static_cast<size_t>(q)));
  const size_t last = static_cast<size_t>(volume.size() - 1);
  for (Sym s = 0; s < q; ++s)
    bwd[last][static_cast<size_t>(s)] =
        std::exp(-look_pair(s, zeta.at(volume.hi + 1), volume.hi));
  for (int i = volume.hi - 1; i >= volume.lo; --i) {
    const size_t k = static_cast<size_t>(i - volume.lo);
    for (Sym s = 0; s < q; ++s) {
      double acc = 0.0;
      for (Sym t = 0; t < q; ++t)
        acc += std::exp(-look_pair(s, t, i) - look_site(t, i + 1)) *
               bwd[k + 1][static_cast<size_t>(t)];
      bwd[k][static_cast<size_t>(s)] = acc;
    }
  }

  const size_t k = static_cast<size_t>(site - volume.lo);
  std::vector<double> out(static_cast<size_t>(q));
  double z = 0.0;
  for (Sym s = 0; s < q; ++s) {
    out[static_cast<size_t>(s)] = fwd[k][static_cast<size_t>(s)] * bwd[k][static_cast<size_t>(s)];
    z += out[static_cast<size_t>(s)];
  }
  for (double& p : out) p /= z;
  return out;
}

/// P(xi) = sum_sigma mu(sigma) prod_i k(xi_i | sigma_i), both tables in
/// canonical order over the same window.
inline std::vector<double> slow_pushforward(const std::vector<double>& mu, int nsites, int q_src,
                                            int q_tgt, const SiteKernel& kernel) {
  uint64_t src_count = 1, tgt_count = 1;
  for (int i = 0; i < nsites; ++i) {
    src_count *= static_cast<uint64_t>(q_src);
    tgt_count *= static_cast<uint64_t>(q_tgt);
  }
  std::vector<double> out(tgt_count, 0.0);
  for (uint64_t xi = 0; xi < tgt_count; ++xi)
    for (uint64_t sg = 0; sg < src_count; ++sg) {
      double w = mu[sg];
      uint64_t xrest = xi, srest = sg;
      for (int i = nsites - 1; i >= 0; --i) {
        const Sym x = static_cast<Sym>(xrest % static_cast<uint64_t>(q_tgt));
        const Sym s = static_cast<Sym>(srest % static_cast<uint64_t>(q_src));
        xrest /= static_cast<uint64_t>(q_tgt);
        srest /= static_cast<uint64_t>(q_src);
        w *= kernel.prob(x, s);
      }
      out[xi] += w;
    }
  return out;
}

/// nu(xi_0 = t | xi elsewhere) from a dense transformed table on [-n, n].
inline double slow_conditional_at_origin(const std::vector<double>& nu, int n, int q_tgt,
                                         const std::vector<Sym>& xi, Sym t) {
  const int nsites = 2 * n + 1;
  uint64_t stride0 = 1;
  for (int i = 0; i < n; ++i) stride0 *= static_cast<uint64_t>(q_tgt);
  // Index with the origin slot zeroed; the origin contributes s * stride0.
  uint64_t base = 0;
  for (int k = 0; k < nsites; ++k) {
    const Sym s = (k == n) ? 0 : xi[static_cast<size_t>(k)];
    base = base * static_cast<uint64_t>(q_tgt) + static_cast<uint64_t>(s);
  }
  double mass = 0.0;
  for (Sym s = 0; s < q_tgt; ++s) mass += nu[base + static_cast<uint64_t>(s) * stride0];
  return nu[base + static_cast<uint64_t>(t) * stride0] / mass;
}

/// P(S_l = 0) by explicit enumeration of all 2^l reset patterns.
inline double chain_p0_paths(const AuxChain& chain, int l) {
  double total = 0.0;
  const std::function<void(int, int, double)> walk = [&](int step, int state, double prob) {
    if (step == l) {
      if (state == 0) total += prob;
      return;
    }
    const double reset =
        std::min(chain.gamma[static_cast<size_t>(state)], 1.0 - chain.delta);
    walk(step + 1, 0, prob * reset);
    walk(step + 1, state + 1, prob * (1.0 - reset));
  };
  if (l == 0) return 1.0;
  walk(0, 0, 1.0);
  return total;
}

}  // namespace oracles
