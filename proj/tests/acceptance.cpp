#include <chrono>
#include <iostream>

#include "wpdkit/verification.hpp"

int main() {
  int failures = 0;
  for (int k = 1; k <= 9; ++k) {
    const auto start = std::chrono::steady_clock::now();
    wpdkit::verify::CheckResult r;
    try {
      r = wpdkit::verify::criterion(k);
    } catch (const std::exception& e) {
      r = {std::to_string(k) + ". criterion " + std::to_string(k), false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << secs << " s]\n";
  }
  return failures ? 1 : 0;
}
