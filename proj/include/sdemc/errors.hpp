#ifndef SDEMC_ERRORS_HPP
#define SDEMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sdemc {

// Internal invariant broken (e.g. a thinning probability outside [0,1]).
// Signals a bad bound upstream rather than bad user input.
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// A retry loop exceeded its configured attempt budget.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Every particle weight collapsed to zero at some filtering step.
class degenerate_filter_error : public std::runtime_error {
 public:
  degenerate_filter_error(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Configuration file problems: schema violations, unknown keys, bad values.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested operation is not available for the given model.
class unsupported_model_error : public std::runtime_error {
 public:
  explicit unsupported_model_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Data ingestion failure; carries the offending row when known.
class ingest_error : public std::runtime_error {
 public:
  explicit ingest_error(const std::string& what, long row = -1)
      : std::runtime_error(what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

}  // namespace sdemc

#endif
