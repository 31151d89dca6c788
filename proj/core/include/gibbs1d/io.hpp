#pragma once

#include <string>
#include <vector>

namespace gibbs1d {

/// Shortest exact-ish decimal with 17 significant digits ("%.17g"), locale-free.
std::string format_g17(double x);

/// One CSV line from cells, comma-joined, '\n'-terminated.
std::string csv_line(const std::vector<std::string>& cells);

/// log(sum_i exp(x_i)) with a single max shift. Empty input is an error.
double log_sum_exp(const std::vector<double>& xs);

}  // namespace gibbs1d
