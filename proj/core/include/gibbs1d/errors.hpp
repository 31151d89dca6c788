#pragma once

#include <stdexcept>
#include <string>

namespace gibbs1d {

/// Error categories. The CLI maps them to process exit codes; library users
/// can branch on them without parsing messages.
enum class errc {
  invalid_input,           ///< malformed model files, bad arguments, missing files
  cap_exceeded,            ///< an enumeration would exceed the configured cap
  model_condition,         ///< a summability / positivity condition fails (e.g. divergent decay sum)
  unsupported_constraint,  ///< conditioning event has no mass under the model
  fit_degenerate,          ///< not enough usable points for a decay fit
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace gibbs1d
