#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wpdkit::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 0;
};

/// Acceptance criterion k (1..9).
CheckResult criterion(int k, const Options& options = {});
std::vector<CheckResult> acceptance(const Options& options = {});

/// Reproduction of a built-in example ("ums", "hexagon", "boutin-kemper").
std::vector<CheckResult> example(const std::string& name);

}  // namespace wpdkit::verify
