#include "gibbs1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gibbs1d {

namespace {

uint64_t checked_pow(int q, int n, uint64_t cap, const char* what) {
  long double exact = 1.0L;
  for (int k = 0; k < n; ++k) exact *= q;
  if (exact > static_cast<long double>(cap))
    fail(errc::cap_exceeded, std::string("enumeration-too-large: ") + what + " requires " +
                                 std::to_string(static_cast<double>(exact)) +
                                 " entries, cap is " + std::to_string(cap));
  uint64_t count = 1;
  for (int k = 0; k < n; ++k) count *= static_cast<uint64_t>(q);
  return count;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) fail(errc::invalid_input, std::string(what) + ": non-finite value");
}

}  // namespace

Term Term::exponential_pair(double coupling, double rate) {
  require_finite(coupling, "exponential-pair coupling");
  if (!(rate > 0.0)) fail(errc::model_condition, "exponential-pair rate must be > 0");
  Term t;
  t.family = Family::exponential_pair;
  t.coupling = coupling;
  t.rate = rate;
  return t;
}

Term Term::power_law_pair(double coupling, double exponent) {
  require_finite(coupling, "power-law-pair coupling");
  if (!(exponent > 1.0))
    fail(errc::model_condition,
         "power-law-pair exponent must be > 1, otherwise f(K) = sum over pairs at the origin "
         "diverges");
  Term t;
  t.family = Family::power_law_pair;
  t.coupling = coupling;
  t.exponent = exponent;
  return t;
}

Term Term::single_site_field(double field) {
  require_finite(field, "single-site-field value");
  Term t;
  t.family = Family::single_site_field;
  t.coupling = field;
  return t;
}

Term Term::finite_range_table(int range, std::vector<std::vector<double>> tables) {
  if (range < 0) fail(errc::invalid_input, "finite-range-table: range must be >= 0");
  if (static_cast<int>(tables.size()) != range + 1)
    fail(errc::invalid_input, "finite-range-table: expected one table per diameter 0..range");
  for (const auto& tab : tables)
    for (double v : tab) require_finite(v, "finite-range-table entry");
  Term t;
  t.family = Family::finite_range_table;
  t.range = range;
  t.tables = std::move(tables);
  return t;
}

Potential::Potential(Alphabet alphabet, std::vector<Term> terms)
    : alphabet_(std::move(alphabet)), terms_(std::move(terms)) {
  const int q = alphabet_.size();
  for (const Term& t : terms_) {
    switch (t.family) {
      case Family::exponential_pair:
      case Family::power_law_pair:
      case Family::single_site_field:
        if (!alphabet_.has_values())
          fail(errc::invalid_input,
               "pair/field families require numeric symbol values on the alphabet");
        break;
      case Family::finite_range_table:
        for (int d = 0; d <= t.range; ++d) {
          uint64_t want = checked_pow(q, d + 1, uint64_t(1) << 30, "finite-range table");
          if (t.tables[static_cast<size_t>(d)].size() != want)
            fail(errc::invalid_input, "finite-range-table: diameter " + std::to_string(d) +
                                          " table needs " + std::to_string(want) + " entries");
        }
        break;
    }
  }
}

double Potential::evaluate(Interval A, const SpinConfig& cover) const {
  if (!cover.window().contains(A))
    fail(errc::invalid_input, "uncovered-site: configuration window does not cover interval [" +
                                  std::to_string(A.lo) + "," + std::to_string(A.hi) + "]");
  const int d = A.diameter();
  double v = 0.0;
  for (const Term& t : terms_) {
    switch (t.family) {
      case Family::exponential_pair:
        if (d >= 1)
          v += t.coupling * std::exp(-t.rate * d) * alphabet_.value(cover.at(A.lo)) *
               alphabet_.value(cover.at(A.hi));
        break;
      case Family::power_law_pair:
        if (d >= 1)
          v += t.coupling * std::pow(static_cast<double>(d), -t.exponent) *
               alphabet_.value(cover.at(A.lo)) * alphabet_.value(cover.at(A.hi));
        break;
      case Family::single_site_field:
        if (d == 0) v += t.coupling * alphabet_.value(cover.at(A.lo));
        break;
      case Family::finite_range_table:
        if (d <= t.range) {
          uint64_t idx = 0;
          for (int x = A.lo; x <= A.hi; ++x)
            idx = idx * static_cast<uint64_t>(alphabet_.size()) +
                  static_cast<uint64_t>(cover.at(x));
          v += t.tables[static_cast<size_t>(d)][idx];
        }
        break;
    }
  }
  if (d == 0) {
    auto it = site_terms_.find(A.lo);
    if (it != site_terms_.end()) v += it->second[static_cast<size_t>(cover.at(A.lo))];
  }
  return v;
}

namespace {

double table_sup(const std::vector<double>& tab) {
  double m = 0.0;
  for (double v : tab) m = std::max(m, std::abs(v));
  return m;
}

/// Upper bound on sum_{d=m}^{inf} d^{-g}, g > 1: partial sum plus integral tail.
double zeta_tail_upper(double g, int m) {
  const int cutoff = std::max(64, 10 * m);
  double s = 0.0;
  for (int d = m; d <= cutoff; ++d) s += std::pow(static_cast<double>(d), -g);
  s += std::pow(static_cast<double>(cutoff), 1.0 - g) / (g - 1.0);
  return s;
}

/// f contribution of one term at separation K (K >= 0).
double term_f(const Term& t, const Alphabet& alpha, int K) {
  const double s2 = alpha.has_values() ? alpha.max_abs_value() * alpha.max_abs_value() : 0.0;
  switch (t.family) {
    case Family::exponential_pair: {
      const int m = std::max(K, 1);
      return 2.0 * std::abs(t.coupling) * s2 * std::exp(-t.rate * m) / (-std::expm1(-t.rate));
    }
    case Family::power_law_pair: {
      const int m = std::max(K, 1);
      return 2.0 * std::abs(t.coupling) * s2 * zeta_tail_upper(t.exponent, m);
    }
    case Family::single_site_field:
      return K == 0 ? std::abs(t.coupling) * alpha.max_abs_value() : 0.0;
    case Family::finite_range_table: {
      double acc = 0.0;
      for (int d = std::max(K, 0); d <= t.range; ++d) {
        const double placements = d == 0 ? 1.0 : static_cast<double>(d + 1);
        acc += placements * table_sup(t.tables[static_cast<size_t>(d)]);
      }
      return acc;
    }
  }
  return 0.0;
}

/// Upper bound on sum_{n >= N} of the term's f(n), N >= 0.
double term_f_tail(const Term& t, const Alphabet& alpha, int N) {
  const double s2 = alpha.has_values() ? alpha.max_abs_value() * alpha.max_abs_value() : 0.0;
  switch (t.family) {
    case Family::exponential_pair: {
      const double B = 2.0 * std::abs(t.coupling) * s2 / (-std::expm1(-t.rate));
      const double geo = 1.0 / (-std::expm1(-t.rate));
      if (N >= 1) return B * std::exp(-t.rate * N) * geo;
      return B * std::exp(-t.rate) * (1.0 + geo);  // f(0) = f(1), then the n >= 1 series
    }
    case Family::power_law_pair: {
      if (!(t.exponent > 2.0))
        fail(errc::model_condition,
             "divergence: sum_{n>=0} f(n) < infinity fails for power-law pair exponent " +
                 std::to_string(t.exponent) + " (requires exponent > 2)");
      const double g = t.exponent;
      const double c = 2.0 * std::abs(t.coupling) * s2;
      const int n0 = std::max(N, 1);
      // sum_{n>=n0} sum_{d>=n} d^-g = sum_{d>=n0} (d-n0+1) d^-g
      const int cutoff = std::max(256, 10 * n0);
      double s = 0.0;
      for (int d = n0; d <= cutoff; ++d)
        s += static_cast<double>(d - n0 + 1) * std::pow(static_cast<double>(d), -g);
      s += std::pow(static_cast<double>(cutoff), 2.0 - g) / (g - 2.0);
      double total = c * s;
      if (N == 0) total += term_f(t, alpha, 0);
      return total;
    }
    case Family::single_site_field:
      return N == 0 ? std::abs(t.coupling) * alpha.max_abs_value() : 0.0;
    case Family::finite_range_table: {
      double acc = 0.0;
      for (int n = N; n <= t.range; ++n) acc += term_f(t, alpha, n);
      return acc;
    }
  }
  return 0.0;
}

}  // namespace

double Potential::decay_f(int K) const {
  K = std::max(K, 0);
  double acc = 0.0;
  for (const Term& t : terms_) acc += term_f(t, alphabet_, K);
  if (K == 0 && !site_terms_.empty()) {
    double m = 0.0;
    for (const auto& [site, vals] : site_terms_) m = std::max(m, table_sup(vals));
    acc += m;
  }
  return acc;
}

double Potential::decay_f_tail(int N) const {
  N = std::max(N, 0);
  double acc = 0.0;
  for (const Term& t : terms_) acc += term_f_tail(t, alphabet_, N);
  if (N == 0 && !site_terms_.empty()) {
    double m = 0.0;
    for (const auto& [site, vals] : site_terms_) m = std::max(m, table_sup(vals));
    acc += m;
  }
  return acc;
}

std::optional<int> Potential::finite_range() const {
  int r = 0;
  for (const Term& t : terms_) {
    switch (t.family) {
      case Family::exponential_pair:
      case Family::power_law_pair:
        if (t.coupling != 0.0) return std::nullopt;
        break;
      case Family::single_site_field:
        break;
      case Family::finite_range_table:
        for (int d = 0; d <= t.range; ++d)
          if (table_sup(t.tables[static_cast<size_t>(d)]) > 0.0) r = std::max(r, d);
        break;
    }
  }
  return r;
}

Potential Potential::with_site_terms(std::map<int, std::vector<double>> site_terms) const {
  for (const auto& [site, vals] : site_terms) {
    if (static_cast<int>(vals.size()) != alphabet_.size())
      fail(errc::invalid_input, "site term at " + std::to_string(site) +
                                    ": needs one value per alphabet symbol");
    for (double v : vals) require_finite(v, "site term");
  }
  Potential out = *this;
  for (auto& [site, vals] : site_terms) {
    auto [it, inserted] = out.site_terms_.try_emplace(site, vals);
    if (!inserted)
      for (size_t s = 0; s < vals.size(); ++s) it->second[s] += vals[s];
  }
  return out;
}

Potential sum(const Potential& a, const Potential& b) {
  if (!(a.alphabet() == b.alphabet()))
    fail(errc::invalid_input, "sum: potentials must share one alphabet");
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  Potential out(a.alphabet(), std::move(terms));
  out = out.with_site_terms(a.site_terms());
  out = out.with_site_terms(b.site_terms());
  return out;
}

DecayProfile decay_profile(const Potential& pot) {
  DecayProfile profile;
  profile.f = [pot](int k) { return pot.decay_f(k); };
  profile.tail = [pot](int n) { return pot.decay_f_tail(n); };
  return profile;
}

double big_F(const DecayProfile& profile, int k) { return 2.0 * profile.tail(std::max(k, 0)); }

double gamma_m(const DecayProfile& profile, int m) { return 2.0 * std::expm1(big_F(profile, m)); }

std::vector<double> big_F_table(const DecayProfile& profile, int m_max) {
  if (m_max < 0) fail(errc::invalid_input, "big_F_table: m_max must be >= 0");
  std::vector<double> F(static_cast<size_t>(m_max) + 1, 0.0);
  F[static_cast<size_t>(m_max)] = 2.0 * profile.tail(m_max);
  for (int k = m_max - 1; k >= 0; --k)
    F[static_cast<size_t>(k)] = F[static_cast<size_t>(k) + 1] + 2.0 * profile.f(k);
  return F;
}

std::vector<double> gamma_table(const DecayProfile& profile, int m_max) {
  const std::vector<double> F = big_F_table(profile, m_max);
  std::vector<double> gamma(F.size());
  for (size_t i = 0; i < F.size(); ++i) gamma[i] = 2.0 * std::expm1(F[i]);
  return gamma;
}

std::vector<double> f_table_for(const Potential& pot, int m_max) {
  if (m_max < 0) fail(errc::invalid_input, "f_table_for: m_max must be >= 0");
  std::vector<double> f(static_cast<size_t>(m_max) + 1, 0.0);
  for (int m = 0; m <= m_max; ++m) f[static_cast<size_t>(m)] = pot.decay_f(m);
  return f;
}

TruncationSpec make_truncation(const Potential& pot, int radius) {
  if (radius < 0) fail(errc::invalid_input, "truncation radius must be >= 0");
  return TruncationSpec{radius, pot.decay_f(radius + 1)};
}

void for_each_interval(Interval volume, int radius, IntervalScope scope,
                       const std::function<void(Interval)>& fn) {
  for (int i = volume.lo - radius; i <= volume.hi; ++i) {
    for (int j = std::max(i, volume.lo); j <= i + radius; ++j) {
      const bool has_origin = i <= 0 && 0 <= j;
      if (scope == IntervalScope::excluding_origin && has_origin) continue;
      if (scope == IntervalScope::containing_origin && !has_origin) continue;
      fn(Interval(i, j));
    }
  }
}

double hamiltonian(const Potential& pot, Interval volume, const SpinConfig& sigma,
                   const SpinConfig& zeta, const TruncationSpec& trunc, IntervalScope scope) {
  if (!(sigma.window() == volume))
    fail(errc::invalid_input, "uncovered-site: sigma window must equal the volume");
  if (!zeta.window().contains(volume.expand(trunc.radius)))
    fail(errc::invalid_input,
         "boundary-window: zeta window must cover the volume expanded by the truncation radius");
  sigma.validate_against(pot.alphabet());
  zeta.validate_against(pot.alphabet());
  const SpinConfig full = patch(sigma, zeta);
  double h = 0.0;
  for_each_interval(volume, trunc.radius, scope,
                    [&](Interval A) { h += pot.evaluate(A, full); });
  return h;
}

namespace {

/// One interval with its contributions reduced to flat coefficients, so the
/// enumeration inner loop stays branch-light.
struct CompiledInterval {
  int lo = 0;
  int hi = 0;
  double pair_coeff = 0.0;
  double field_coeff = 0.0;
  const double* site_term = nullptr;                // singleton adjustment, per symbol
  std::vector<const std::vector<double>*> tables;   // per matching table term
};

struct VolumeEnumerator {
  const Potential& pot;
  Interval volume;
  int radius;
  int q;
  std::vector<double> values;                 // numeric symbol values (pair/field families)
  std::vector<Sym> buf;                       // window-wide symbol buffer
  int buf_lo;                                 // site of buf[0]
  std::vector<std::vector<CompiledInterval>> attach;  // per volume-site depth
  const std::vector<std::vector<Sym>>* allowed;
  std::vector<double>* out;

  double eval(const CompiledInterval& ci) const {
    double v = 0.0;
    if (ci.pair_coeff != 0.0)
      v += ci.pair_coeff * values[static_cast<size_t>(buf[static_cast<size_t>(ci.lo - buf_lo)])] *
           values[static_cast<size_t>(buf[static_cast<size_t>(ci.hi - buf_lo)])];
    if (ci.lo == ci.hi) {
      const Sym s = buf[static_cast<size_t>(ci.lo - buf_lo)];
      if (ci.field_coeff != 0.0) v += ci.field_coeff * values[static_cast<size_t>(s)];
      if (ci.site_term) v += ci.site_term[s];
    }
    for (const std::vector<double>* tab : ci.tables) {
      uint64_t idx = 0;
      for (int x = ci.lo; x <= ci.hi; ++x)
        idx = idx * static_cast<uint64_t>(q) +
              static_cast<uint64_t>(buf[static_cast<size_t>(x - buf_lo)]);
      v += (*tab)[idx];
    }
    return v;
  }

  void run(int depth, double acc, uint64_t index) {
    if (depth == volume.size()) {
      (*out)[index] = -acc;
      return;
    }
    const auto& syms = (*allowed)[static_cast<size_t>(depth)];
    const size_t pos = static_cast<size_t>(volume.lo + depth - buf_lo);
    for (size_t slot = 0; slot < syms.size(); ++slot) {
      buf[pos] = syms[slot];
      double d = acc;
      for (const CompiledInterval& ci : attach[static_cast<size_t>(depth)]) d += eval(ci);
      run(depth + 1, d, index * syms.size() + slot);
    }
  }
};

}  // namespace

std::vector<double> negative_hamiltonians(const Potential& pot, Interval volume,
                                          const SpinConfig& zeta, const TruncationSpec& trunc,
                                          IntervalScope scope,
                                          const std::vector<std::vector<Sym>>* allowed,
                                          uint64_t cap) {
  const int q = pot.alphabet().size();
  const int R = trunc.radius;
  if (!zeta.window().contains(volume.expand(R)))
    fail(errc::invalid_input,
         "boundary-window: zeta window must cover the volume expanded by the truncation radius");
  zeta.validate_against(pot.alphabet());

  std::vector<std::vector<Sym>> full_allowed;
  if (!allowed) {
    std::vector<Sym> all(static_cast<size_t>(q));
    for (Sym s = 0; s < q; ++s) all[static_cast<size_t>(s)] = s;
    full_allowed.assign(static_cast<size_t>(volume.size()), all);
    allowed = &full_allowed;
  }
  if (static_cast<int>(allowed->size()) != volume.size())
    fail(errc::invalid_input, "negative_hamiltonians: allowed lists must match volume size");
  long double exact = 1.0L;
  for (const auto& syms : *allowed) {
    if (syms.empty())
      fail(errc::unsupported_constraint, "empty-support: a site has no allowed symbols");
    for (Sym s : syms)
      if (s < 0 || s >= q) fail(errc::invalid_input, "allowed symbol outside alphabet");
    exact *= static_cast<long double>(syms.size());
  }
  if (exact > static_cast<long double>(cap))
    fail(errc::cap_exceeded,
         "enumeration-too-large: volume enumeration requires " +
             std::to_string(static_cast<double>(exact)) + " entries, cap is " +
             std::to_string(cap));
  uint64_t count = 1;
  for (const auto& syms : *allowed) count *= syms.size();

  VolumeEnumerator en{pot, volume, R, q, {}, {}, 0, {}, allowed, nullptr};
  const Interval window = volume.expand(R);
  en.buf_lo = window.lo;
  en.buf.assign(static_cast<size_t>(window.size()), 0);
  for (int x = window.lo; x <= window.hi; ++x)
    if (!volume.contains(x)) en.buf[static_cast<size_t>(x - en.buf_lo)] = zeta.at(x);
  if (pot.alphabet().has_values()) {
    en.values.resize(static_cast<size_t>(q));
    for (Sym s = 0; s < q; ++s) en.values[static_cast<size_t>(s)] = pot.alphabet().value(s);
  } else {
    en.values.assign(static_cast<size_t>(q), 0.0);
  }

  en.attach.assign(static_cast<size_t>(volume.size()), {});
  for_each_interval(volume, R, scope, [&](Interval A) {
    CompiledInterval ci;
    ci.lo = A.lo;
    ci.hi = A.hi;
    const int d = A.diameter();
    for (const Term& t : pot.terms()) {
      switch (t.family) {
        case Family::exponential_pair:
          if (d >= 1) ci.pair_coeff += t.coupling * std::exp(-t.rate * d);
          break;
        case Family::power_law_pair:
          if (d >= 1) ci.pair_coeff += t.coupling * std::pow(static_cast<double>(d), -t.exponent);
          break;
        case Family::single_site_field:
          if (d == 0) ci.field_coeff += t.coupling;
          break;
        case Family::finite_range_table:
          if (d <= t.range) ci.tables.push_back(&t.tables[static_cast<size_t>(d)]);
          break;
      }
    }
    if (d == 0) {
      auto it = pot.site_terms().find(A.lo);
      if (it != pot.site_terms().end()) ci.site_term = it->second.data();
    }
    if (ci.pair_coeff == 0.0 && ci.field_coeff == 0.0 && !ci.site_term && ci.tables.empty())
      return;  // nothing contributes on this interval
    const int attach_site = std::min(A.hi, volume.hi);
    en.attach[static_cast<size_t>(attach_site - volume.lo)].push_back(std::move(ci));
  });

  std::vector<double> out(count, 0.0);
  en.out = &out;
  en.run(0, 0.0, 0);
  return out;
}

}  // namespace gibbs1d
