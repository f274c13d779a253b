#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace wpdkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Numerical tolerances shared by every module.
struct Tolerances {
  double eps_eq = 1e-9;     // grouping of equal distance values
  double eps_tri = 1e-9;    // triangle inequality slack
  double eps_mass = 1e-12;  // probability mass comparisons
};

/// Input violates a documented precondition (bad matrix, bad measure, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact solver was asked to run on an instance above its size cap.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& cap_name, std::size_t cap, std::size_t actual)
      : std::runtime_error("instance exceeds cap '" + cap_name + "' (" + std::to_string(actual) +
                           " > " + std::to_string(cap) + ")"),
        cap_name_(cap_name) {}

  const std::string& cap_name() const noexcept { return cap_name_; }

 private:
  std::string cap_name_;
};

/// A mathematical invariant that should always hold was found broken.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Upper limit on worker threads, read from WPDKIT_THREADS (default: hardware concurrency).
unsigned max_threads();

/// `p` given as a real in [1, inf]; `inf` is represented by kInfinity.
inline bool is_infinite_p(double p) { return p == kInfinity; }

}  // namespace wpdkit
