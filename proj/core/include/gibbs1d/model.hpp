#pragma once

#include <map>
#include <string>

#include "gibbs1d/transform.hpp"

namespace gibbs1d {

/// A model document: one potential plus named channels acting on its alphabet.
struct Model {
  Potential potential;
  std::map<std::string, Channel> channels;
};

/// Parse a model from JSON text. The schema is strict: unknown fields are
/// rejected so typos cannot silently change an experiment.
///
/// {
///   "alphabet": ["+", "-"],
///   "spin_values": [1.0, -1.0],            // optional
///   "terms": [
///     {"family": "exponential_pair", "coupling": J, "rate": lambda},
///     {"family": "power_law_pair",   "coupling": J, "exponent": gamma},
///     {"family": "single_site_field","field": h},
///     {"family": "finite_range_table", "range": r, "tables": [[...], ...]}
///   ],
///   "channels": {                           // optional
///     "noise":    {"type": "kernel", "target": [...], "rows": [[...], ...]},
///     "decimate": {"type": "det",    "target": [...], "map": ["a", ...]}
///   }
/// }
Model parse_model(const std::string& text);

/// Load and parse a model file; a missing file is reported as
/// "model not found".
Model load_model(const std::string& path);

const Channel& select_channel(const Model& model, const std::string& name);

}  // namespace gibbs1d
