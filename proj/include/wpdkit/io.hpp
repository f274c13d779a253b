#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpdkit/diagram.hpp"
#include "wpdkit/filtration.hpp"
#include "wpdkit/homology.hpp"
#include "wpdkit/metric.hpp"
#include "wpdkit/pd_distances.hpp"
#include "wpdkit/stability.hpp"

namespace wpdkit::io {

/// Malformed input; `line` is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class InputFormat { automatic, matrix, points };
InputFormat parse_format(const std::string& name);

/// Rows of comma-separated floats; blank lines are skipped, every row must have the same width.
std::vector<std::vector<double>> parse_csv(std::istream& in);

/// {"n": n, "d": [[...]], "mu": [...]} with "n" and "mu" optional.
MMSpace parse_matrix_json(const std::string& text, const Tolerances& tol = {});

/// Loads a distance matrix (CSV or JSON) or a CSV point cloud. With `automatic`, .json files
/// are matrices and a CSV is a matrix when it is square, symmetric and zero on the diagonal.
MMSpace load_mm_space(const std::string& path, InputFormat format = InputFormat::automatic,
                      const Tolerances& tol = {});

nlohmann::ordered_json to_json(const CriticalGrid& grid);
nlohmann::ordered_json to_json(const DiscreteMeasure1D& m);
nlohmann::ordered_json to_json(const VRFiltration& f, const DiscreteMeasure1D* weights = nullptr);
nlohmann::ordered_json to_json(const BirthDeathFunction& zb);
nlohmann::ordered_json to_json(const PersistenceDiagram& d);
nlohmann::ordered_json to_json(const WeightedPersistenceDiagram& w);
nlohmann::ordered_json to_json(const Matching& m);
nlohmann::ordered_json to_json(const WeightedMatching& w);
nlohmann::ordered_json to_json(const StabilityReport& r);

/// {"metric": ..., "p": ..., "value": ..., "mode": ..., "certificate": ...}
nlohmann::ordered_json distance_json(const std::string& metric, double p, double value, DistanceMode mode,
                                     nlohmann::ordered_json certificate = nullptr);
nlohmann::ordered_json distance_json(const std::string& metric, double p, const DistanceResult& r);

/// Numbers as JSON, with infinities written as the string "inf".
nlohmann::ordered_json number(double v);

}  // namespace wpdkit::io
