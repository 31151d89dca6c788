#include "gibbs1d/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gibbs1d/errors.hpp"

namespace gibbs1d {

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) fail(errc::invalid_input, "log_sum_exp: empty input");
  double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;  // all -inf (or a stray inf) propagates
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace gibbs1d
