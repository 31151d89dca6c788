#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbs1d/errors.hpp"

namespace gibbs1d {

/// Symbol = index into an Alphabet. Configurations store indices, not names.
using Sym = int;

/// Ordered finite single-site state space. The first symbol plays the role of
/// the reference ("vacuum") state wherever a distinguished symbol is needed.
/// Optional numeric values per symbol feed the pair / field potential families.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names,
                    std::optional<std::vector<double>> values = std::nullopt);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Sym s) const { return names_.at(static_cast<size_t>(s)); }
  Sym index_of(const std::string& name) const;

  bool has_values() const { return !values_.empty(); }
  /// Numeric value of a symbol; errors if the alphabet carries no values.
  double value(Sym s) const;
  /// max_s |value(s)|
  double max_abs_value() const;

  bool operator==(const Alphabet& other) const {
    return names_ == other.names_ && values_ == other.values_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

/// Closed integer interval [lo, hi] of lattice sites, lo <= hi.
struct Interval {
  int lo = 0;
  int hi = 0;

  Interval() = default;
  Interval(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) fail(errc::invalid_input, "Interval: lo > hi");
  }

  int diameter() const { return hi - lo; }
  int size() const { return hi - lo + 1; }
  bool contains(int site) const { return lo <= site && site <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool intersects(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }
  Interval expand(int radius) const { return Interval(lo - radius, hi + radius); }
  bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
};

/// Assignment of one symbol per site of a window. Values are immutable after
/// construction except through patch(), which builds a new config.
class SpinConfig {
 public:
  SpinConfig() = default;
  SpinConfig(Interval window, std::vector<Sym> values);
  static SpinConfig constant(Interval window, Sym s);

  const Interval& window() const { return window_; }
  Sym at(int site) const;
  const std::vector<Sym>& values() const { return values_; }

  /// Max symbol index present; used to validate against an alphabet size.
  void validate_against(const Alphabet& alphabet) const;

  bool operator==(const SpinConfig& other) const {
    return window_ == other.window_ && values_ == other.values_;
  }

 private:
  Interval window_{0, 0};
  std::vector<Sym> values_;
};

/// inner wins on its window, outer fills the rest of outer's window.
/// pre: outer.window() covers inner.window().
SpinConfig patch(const SpinConfig& inner, const SpinConfig& outer);

/// The restriction of config to a sub-window of its window.
SpinConfig restrict_to(const SpinConfig& config, Interval window);

/// Dense lexicographic indexing of configurations on a window: site order
/// ascending, symbol order per site, last site varies fastest.
struct IndexSpace {
  Interval window{0, 0};
  int q = 2;
  int nsites = 1;
  uint64_t count = 0;

  IndexSpace() = default;
  IndexSpace(Interval w, int alphabet_size, uint64_t cap = kDefaultCap);

  /// Default enumeration cap: at most 2^24 configurations per dense table.
  static constexpr uint64_t kDefaultCap = uint64_t(1) << 24;

  uint64_t stride(int k) const;  // q^(nsites-1-k)
  void decode(uint64_t index, std::vector<Sym>& out) const;
  uint64_t encode(const std::vector<Sym>& syms) const;
  uint64_t encode_config(const SpinConfig& config) const;  // config window must equal window
  SpinConfig config_at(uint64_t index) const;
};

/// All configurations on the window in canonical order. Subject to the same
/// enumeration cap as dense tables.
std::vector<SpinConfig> enumerate_configs(const Alphabet& alphabet, Interval window,
                                          uint64_t cap = IndexSpace::kDefaultCap);

/// Render a config as the concatenation of its symbol names, site order ascending.
std::string to_string(const Alphabet& alphabet, const SpinConfig& config);

}  // namespace gibbs1d
