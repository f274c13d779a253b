#include "wpdkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wpdkit::io {

using nlohmann::ordered_json;

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

InputFormat parse_format(const std::string& name) {
  if (name == "auto") return InputFormat::automatic;
  if (name == "matrix") return InputFormat::matrix;
  if (name == "points") return InputFormat::points;
  throw ValidationError("unknown input format '" + name + "' (expected auto, matrix or points)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) throw ParseError("not a number: '" + t + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value: '" + t + "'", line);
  return v;
}

bool looks_like_matrix(const std::vector<std::vector<double>>& rows, double tol) {
  const std::size_t n = rows.size();
  if (n == 0 || rows[0].size() != n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0.0) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(rows[i][j] - rows[j][i]) > tol) return false;
  }
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<std::vector<double>> parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_number(field, number));
    if (line.back() == ',') throw ParseError("trailing comma", number);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("expected " + std::to_string(rows.front().size()) + " values, found " +
                           std::to_string(row.size()),
                       number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  return rows;
}

MMSpace parse_matrix_json(const std::string& text, const Tolerances& tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object() || !j.contains("d")) throw ParseError("expected an object with a \"d\" matrix");
  std::vector<std::vector<double>> d;
  try {
    d = j.at("d").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("\"d\" must be an array of numeric rows");
  }
  if (d.empty()) throw ParseError("\"d\" is empty");
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() != d.size())
      throw ParseError("\"n\" does not match the number of rows of \"d\"");
  }
  for (std::size_t r = 0; r < d.size(); ++r)
    if (d[r].size() != d.size())
      throw ParseError("row " + std::to_string(r) + " of \"d\" has " + std::to_string(d[r].size()) + " entries, expected " +
                       std::to_string(d.size()));
  auto space = validate_pseudo_metric(d, tol.eps_tri);
  if (!j.contains("mu")) return MMSpace::uniform(std::move(space));
  std::vector<double> mu;
  try {
    mu = j.at("mu").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("\"mu\" must be an array of numbers");
  }
  return MMSpace(std::move(space), std::move(mu), tol);
}

MMSpace load_mm_space(const std::string& path, InputFormat format, const Tolerances& tol) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) {
    if (format == InputFormat::points) throw ValidationError("point clouds are read from CSV only");
    return parse_matrix_json(text, tol);
  }
  std::istringstream in(text);
  const auto rows = parse_csv(in);
  if (format == InputFormat::matrix || (format == InputFormat::automatic && looks_like_matrix(rows, tol.eps_tri))) {
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].size() != rows.size())
        throw ParseError("distance matrix must be square (" + std::to_string(rows.size()) + " rows, " +
                         std::to_string(rows[r].size()) + " columns)");
    return MMSpace::uniform(validate_pseudo_metric(rows, tol.eps_tri));
  }
  return MMSpace::uniform(euclidean_space(rows));
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

ordered_json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json to_json(const CriticalGrid& grid) { return grid.values(); }

ordered_json to_json(const DiscreteMeasure1D& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back({{"value", m.support()[i]}, {"mass", m.mass()[i]}});
  return out;
}

ordered_json to_json(const VRFiltration& f, const DiscreteMeasure1D* weights) {
  ordered_json out;
  out["grid"] = to_json(f.grid());
  ordered_json simplices = ordered_json::array();
  for (int d = 0; d <= f.max_dim(); ++d)
    for (const auto& s : f.simplices(d)) simplices.push_back({{"verts", s.vertices}, {"diam", s.diameter}});
  out["simplices"] = std::move(simplices);
  if (weights) out["weights"] = weights->mass();
  return out;
}

ordered_json to_json(const BirthDeathFunction& zb) {
  ordered_json out;
  out["grid"] = to_json(zb.grid());
  out["degree"] = zb.degree();
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < zb.size(); ++i)
    for (std::size_t j = i; j < zb.size(); ++j) table.push_back({i, j, zb.at(i, j)});
  out["zb"] = std::move(table);
  return out;
}

ordered_json to_json(const PersistenceDiagram& d) {
  ordered_json out;
  out["grid"] = to_json(d.grid());
  out["degree"] = d.degree();
  ordered_json bars = ordered_json::array();
  for (const auto& b : d.bars()) bars.push_back({{"birth", b.birth}, {"death", b.death}, {"mult", b.multiplicity}});
  out["bars"] = std::move(bars);
  return out;
}

ordered_json to_json(const WeightedPersistenceDiagram& w) {
  ordered_json out = to_json(w.diagram());
  ordered_json weights = ordered_json::array();
  for (const auto& [iv, mass] : w.weight())
    weights.push_back({{"birth", w.grid()[iv.first]}, {"death", w.grid()[iv.second]}, {"mass", mass}});
  out["weights"] = std::move(weights);
  return out;
}

namespace {

ordered_json cell_json(const CriticalGrid& q, const CriticalGrid& r, const MatchingCell& c) {
  return {{"from", {q[c.first.first], q[c.first.second]}}, {"to", {r[c.second.first], r[c.second.second]}}};
}

}  // namespace

ordered_json to_json(const Matching& m) {
  ordered_json out = ordered_json::array();
  for (const auto& [c, k] : m.cells) {
    auto e = cell_json(m.source_grid, m.target_grid, c);
    e["count"] = k;
    out.push_back(std::move(e));
  }
  return out;
}

ordered_json to_json(const WeightedMatching& w) {
  ordered_json out;
  out["matching"] = to_json(w.gamma);
  ordered_json coupling = ordered_json::array();
  for (const auto& [c, mass] : w.eta) {
    auto e = cell_json(w.gamma.source_grid, w.gamma.target_grid, c);
    e["mass"] = mass;
    coupling.push_back(std::move(e));
  }
  out["coupling"] = std::move(coupling);
  return out;
}

ordered_json to_json(const StabilityReport& r) {
  ordered_json out;
  out["degree"] = r.degree;
  out["p"] = number(r.p);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs_label},
                      {"lhs_bounds", {number(c.lhs.lower), number(c.lhs.upper)}},
                      {"rhs", c.rhs_label},
                      {"rhs_bounds", {number(c.rhs.lower), number(c.rhs.upper)}},
                      {"verdict", to_string(c.verdict)}});
  out["checks"] = std::move(checks);
  out["violated"] = r.violated();
  return out;
}

ordered_json distance_json(const std::string& metric, double p, double value, DistanceMode mode,
                           ordered_json certificate) {
  ordered_json out;
  out["metric"] = metric;
  out["p"] = number(p);
  out["value"] = number(value);
  out["mode"] = to_string(mode);
  out["certificate"] = std::move(certificate);
  return out;
}

ordered_json distance_json(const std::string& metric, double p, const DistanceResult& r) {
  ordered_json cert = nullptr;
  if (r.weighted)
    cert = to_json(*r.weighted);
  else if (r.matching)
    cert = to_json(*r.matching);
  return distance_json(metric, p, r.value, r.mode, std::move(cert));
}

}  // namespace wpdkit::io
