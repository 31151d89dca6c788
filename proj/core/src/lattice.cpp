#include "gibbs1d/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs1d {

Alphabet::Alphabet(std::vector<std::string> names, std::optional<std::vector<double>> values)
    : names_(std::move(names)) {
  if (names_.size() < 2) fail(errc::invalid_input, "Alphabet: needs at least 2 symbols");
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) fail(errc::invalid_input, "Alphabet: empty symbol name");
    for (size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        fail(errc::invalid_input, "Alphabet: duplicate symbol '" + names_[i] + "'");
  }
  if (values.has_value()) {
    values_ = std::move(*values);
    if (values_.size() != names_.size())
      fail(errc::invalid_input, "Alphabet: values length does not match symbol count");
  } else if (names_.size() == 2) {
    values_ = {1.0, -1.0};  // binary default: first symbol is the + state
  }
}

Sym Alphabet::index_of(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Sym>(i);
  fail(errc::invalid_input, "Alphabet: unknown symbol '" + name + "'");
}

double Alphabet::value(Sym s) const {
  if (values_.empty())
    fail(errc::invalid_input,
         "Alphabet: no numeric symbol values configured (required by pair/field families)");
  return values_.at(static_cast<size_t>(s));
}

double Alphabet::max_abs_value() const {
  double m = 0.0;
  for (Sym s = 0; s < size(); ++s) m = std::max(m, std::abs(value(s)));
  return m;
}

SpinConfig::SpinConfig(Interval window, std::vector<Sym> values)
    : window_(window), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != window_.size())
    fail(errc::invalid_input, "SpinConfig: value count does not match window size");
  for (Sym v : values_)
    if (v < 0) fail(errc::invalid_input, "SpinConfig: negative symbol index");
}

SpinConfig SpinConfig::constant(Interval window, Sym s) {
  return SpinConfig(window, std::vector<Sym>(static_cast<size_t>(window.size()), s));
}

Sym SpinConfig::at(int site) const {
  if (!window_.contains(site))
    fail(errc::invalid_input, "SpinConfig: site " + std::to_string(site) + " outside window [" +
                                  std::to_string(window_.lo) + "," + std::to_string(window_.hi) +
                                  "]");
  return values_[static_cast<size_t>(site - window_.lo)];
}

void SpinConfig::validate_against(const Alphabet& alphabet) const {
  for (Sym v : values_)
    if (v >= alphabet.size())
      fail(errc::invalid_input, "SpinConfig: symbol index " + std::to_string(v) +
                                    " outside alphabet of size " + std::to_string(alphabet.size()));
}

SpinConfig patch(const SpinConfig& inner, const SpinConfig& outer) {
  if (!outer.window().contains(inner.window()))
    fail(errc::invalid_input, "patch: outer window does not cover inner window");
  std::vector<Sym> vals = outer.values();
  for (int site = inner.window().lo; site <= inner.window().hi; ++site)
    vals[static_cast<size_t>(site - outer.window().lo)] = inner.at(site);
  return SpinConfig(outer.window(), std::move(vals));
}

SpinConfig restrict_to(const SpinConfig& config, Interval window) {
  if (!config.window().contains(window))
    fail(errc::invalid_input, "restrict_to: window not covered by config");
  std::vector<Sym> vals;
  vals.reserve(static_cast<size_t>(window.size()));
  for (int site = window.lo; site <= window.hi; ++site) vals.push_back(config.at(site));
  return SpinConfig(window, std::move(vals));
}

IndexSpace::IndexSpace(Interval w, int alphabet_size, uint64_t cap)
    : window(w), q(alphabet_size), nsites(w.size()) {
  if (q < 2) fail(errc::invalid_input, "IndexSpace: alphabet size must be >= 2");
  long double exact = 1.0L;
  for (int k = 0; k < nsites; ++k) exact *= q;
  if (exact > static_cast<long double>(cap))
    fail(errc::cap_exceeded, "enumeration-too-large: window of " + std::to_string(nsites) +
                                 " sites over " + std::to_string(q) + " symbols requires " +
                                 std::to_string(static_cast<double>(exact)) +
                                 " configurations, cap is " + std::to_string(cap));
  count = 1;
  for (int k = 0; k < nsites; ++k) count *= static_cast<uint64_t>(q);
}

uint64_t IndexSpace::stride(int k) const {
  uint64_t s = 1;
  for (int j = k + 1; j < nsites; ++j) s *= static_cast<uint64_t>(q);
  return s;
}

void IndexSpace::decode(uint64_t index, std::vector<Sym>& out) const {
  out.resize(static_cast<size_t>(nsites));
  for (int k = nsites - 1; k >= 0; --k) {
    out[static_cast<size_t>(k)] = static_cast<Sym>(index % static_cast<uint64_t>(q));
    index /= static_cast<uint64_t>(q);
  }
}

uint64_t IndexSpace::encode(const std::vector<Sym>& syms) const {
  uint64_t idx = 0;
  for (int k = 0; k < nsites; ++k) idx = idx * static_cast<uint64_t>(q) + static_cast<uint64_t>(syms[static_cast<size_t>(k)]);
  return idx;
}

uint64_t IndexSpace::encode_config(const SpinConfig& config) const {
  if (!(config.window() == window))
    fail(errc::invalid_input, "IndexSpace: config window mismatch");
  return encode(config.values());
}

SpinConfig IndexSpace::config_at(uint64_t index) const {
  std::vector<Sym> syms;
  decode(index, syms);
  return SpinConfig(window, std::move(syms));
}

std::vector<SpinConfig> enumerate_configs(const Alphabet& alphabet, Interval window, uint64_t cap) {
  IndexSpace space(window, alphabet.size(), cap);
  std::vector<SpinConfig> out;
  out.reserve(static_cast<size_t>(space.count));
  for (uint64_t i = 0; i < space.count; ++i) out.push_back(space.config_at(i));
  return out;
}

std::string to_string(const Alphabet& alphabet, const SpinConfig& config) {
  std::string s;
  for (Sym v : config.values()) s += alphabet.name(v);
  return s;
}

}  // namespace gibbs1d
