#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "gibbs1d/lattice.hpp"

namespace gibbs1d {

/// Interaction families. Every term is translation invariant; a term assigns a
/// real value to each lattice interval [i,j] as a function of the symbols on it.
enum class Family {
  exponential_pair,   ///< J * exp(-rate*d) * v(s_i) * v(s_j) on [i,j], d = j-i >= 1
  power_law_pair,     ///< J * d^(-exponent) * v(s_i) * v(s_j) on [i,j], d >= 1
  single_site_field,  ///< h * v(s_i) on singletons
  finite_range_table, ///< explicit per-diameter tables for d = 0..range
};

struct Term {
  Family family = Family::single_site_field;
  double coupling = 0.0;  ///< J or h
  double rate = 0.0;      ///< exponential decay rate, > 0
  double exponent = 0.0;  ///< power-law exponent, > 1
  int range = 0;          ///< table family: max diameter
  /// table family: tables[d] has one value per local configuration on an
  /// interval of diameter d, canonical lexicographic order, d = 0..range.
  std::vector<std::vector<double>> tables;

  static Term exponential_pair(double coupling, double rate);
  static Term power_law_pair(double coupling, double exponent);
  static Term single_site_field(double field);
  static Term finite_range_table(int range, std::vector<std::vector<double>> tables);
};

/// Truncation of the interaction to intervals of diameter <= radius.
/// per_site_tail bounds the sup-norm sum of all dropped intervals touching a
/// fixed site, so |H_dropped| <= volume_size * per_site_tail.
struct TruncationSpec {
  int radius = 0;
  double per_site_tail = 0.0;
};

/// Which intervals a Hamiltonian sum ranges over, relative to the origin.
/// The splits are used by the first-layer representations: a full volume
/// Hamiltonian is the sum of the origin-free part and the origin part.
enum class IntervalScope { all, excluding_origin, containing_origin };

/// A finite sum of family terms over one alphabet, plus optional per-site
/// singleton adjustments (used to absorb -log kernel factors into the
/// potential without changing any multi-site interaction).
class Potential {
 public:
  Potential(Alphabet alphabet, std::vector<Term> terms);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::map<int, std::vector<double>>& site_terms() const { return site_terms_; }

  /// Value of the interaction on interval A under the covering configuration.
  double evaluate(Interval A, const SpinConfig& cover) const;

  /// Certified upper bound on f(K) = sum over interactions containing the
  /// origin with diameter >= K of their sup norms. Pair families count the two
  /// endpoint pairs per diameter; table families count all d+1 placements.
  double decay_f(int K) const;

  /// Certified upper bound on sum_{n >= N} f(n). Errors with a divergence
  /// message when the sum cannot be finite (power-law pair exponent <= 2).
  double decay_f_tail(int N) const;

  /// Max diameter with a nonzero interaction, or nullopt for infinite range.
  std::optional<int> finite_range() const;

  /// Copy of this potential with per-site singleton adjustments added
  /// (site -> one value per symbol). Multi-site terms are untouched.
  Potential with_site_terms(std::map<int, std::vector<double>> site_terms) const;

 private:
  Alphabet alphabet_;
  std::vector<Term> terms_;
  std::map<int, std::vector<double>> site_terms_;
};

/// Combined potential evaluating as the sum of the two (same alphabet).
Potential sum(const Potential& a, const Potential& b);

/// Decay data as functions, so synthetic profiles can be tested against the
/// same downstream bounds as potential-backed ones.
struct DecayProfile {
  std::function<double(int)> f;     ///< upper bound on f(K)
  std::function<double(int)> tail;  ///< upper bound on sum_{n>=N} f(n)
};

DecayProfile decay_profile(const Potential& pot);

/// F_k = sum_{j>=0} 2 f(j+k).
double big_F(const DecayProfile& profile, int k);

/// gamma_m = 2 (e^{F_m} - 1).
double gamma_m(const DecayProfile& profile, int m);

/// F_0..F_m_max computed downward from one tail evaluation
/// (F_k = F_{k+1} + 2 f(k)), so the sequence is nonincreasing by construction.
std::vector<double> big_F_table(const DecayProfile& profile, int m_max);

/// gamma_0..gamma_m_max from big_F_table, likewise nonincreasing.
std::vector<double> gamma_table(const DecayProfile& profile, int m_max);

/// f(0)..f(m_max) evaluated pointwise.
std::vector<double> f_table_for(const Potential& pot, int m_max);

TruncationSpec make_truncation(const Potential& pot, int radius);

/// Invoke fn(Interval) for every interval A with A∩volume != {} and
/// diameter <= radius, filtered by scope (origin = site 0), ordered by
/// (lo asc, hi asc).
void for_each_interval(Interval volume, int radius, IntervalScope scope,
                       const std::function<void(Interval)>& fn);

/// H = sum of Phi(A, sigma patched into zeta) over the intervals selected by
/// (volume, trunc.radius, scope). sigma covers exactly the volume; zeta covers
/// volume expanded by trunc.radius. The omitted tail is bounded by
/// volume.size() * trunc.per_site_tail.
double hamiltonian(const Potential& pot, Interval volume, const SpinConfig& sigma,
                   const SpinConfig& zeta, const TruncationSpec& trunc,
                   IntervalScope scope = IntervalScope::all);

/// -H for every configuration on the volume, in canonical dense order; the
/// fast path behind exact Gibbs tables. `allowed` optionally restricts the
/// symbols per site (outer vector aligned with volume sites); the output is
/// then in mixed-radix lexicographic order over the allowed lists.
std::vector<double> negative_hamiltonians(const Potential& pot, Interval volume,
                                          const SpinConfig& zeta, const TruncationSpec& trunc,
                                          IntervalScope scope = IntervalScope::all,
                                          const std::vector<std::vector<Sym>>* allowed = nullptr,
                                          uint64_t cap = IndexSpace::kDefaultCap);

}  // namespace gibbs1d
