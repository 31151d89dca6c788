#pragma once

#include <utility>
#include <vector>

#include "gibbs1d/potential.hpp"

namespace gibbs1d {

/// Dense probability table over an arbitrary finite site set (ascending),
/// lexicographic order with the last listed site varying fastest. Symbols are
/// indices into whichever alphabet produced the table.
struct ProbTable {
  std::vector<int> sites;
  int q = 2;
  std::vector<double> probs;

  uint64_t index_of(const std::vector<Sym>& syms) const;
};

/// Exact finite-volume Gibbs measure with boundary condition, as a dense
/// table in canonical configuration order.
struct FiniteGibbs {
  Interval volume{0, 0};
  Alphabet alphabet;
  SpinConfig boundary;
  TruncationSpec trunc;
  double log_z = 0.0;
  double tail_bound = 0.0;  ///< bound on the dropped interaction: |volume| * per-site tail
  std::vector<double> probs;

  IndexSpace space() const { return IndexSpace(volume, alphabet.size()); }
};

/// Boltzmann weights exp(-H) normalized over all configurations on the volume.
FiniteGibbs compute_finite_gibbs(const Potential& pot, Interval volume, const SpinConfig& zeta,
                                 const TruncationSpec& trunc,
                                 uint64_t cap = IndexSpace::kDefaultCap);

/// Marginal law of the listed sites (a subset of the volume, ascending).
ProbTable marginal(const FiniteGibbs& g, const std::vector<int>& sites);

/// Law of the remaining sites given fixed symbols at some sites.
/// Errors when the conditioning event has (numerically) no mass.
ProbTable conditional(const FiniteGibbs& g, const std::vector<std::pair<int, Sym>>& fixed);

double tv_distance(const std::vector<double>& p, const std::vector<double>& q);
double tv_distance(const ProbTable& p, const ProbTable& q);

/// Max over full configurations of the defect of the two-step DLR identity
///   mu_outer(tau) = mu_outer(tau outside inner) * mu_inner^{tau,zeta}(tau on inner).
/// Zero (up to rounding) for any truncated potential.
double dlr_check(const Potential& pot, Interval inner, Interval outer, const SpinConfig& zeta,
                 const TruncationSpec& trunc);

/// CSV with one row per configuration: symbol name per site, then the
/// probability with 17 significant digits.
std::string export_csv(const FiniteGibbs& g);

}  // namespace gibbs1d
