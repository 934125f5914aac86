#pragma once

#include <stdexcept>
#include <string>

namespace rwave {

/// Invalid or inconsistent user configuration (bad grid, causality margin, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an API precondition (size mismatch, missing snapshot, ...).
class contract_violation : public std::logic_error {
 public:
  explicit contract_violation(const std::string& what) : std::logic_error(what) {}
};

/// Non-finite values appeared during time stepping. Defocusing solutions do
/// not blow up, so this always indicates a numerics fault (CFL, bad data).
class blowup_error : public std::runtime_error {
 public:
  blowup_error(const std::string& what, double t)
      : std::runtime_error(what + " at t = " + std::to_string(t)), time(t) {}
  double time;
};

}  // namespace rwave
