#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wpdkit/diagram.hpp"
#include "wpdkit/examples.hpp"
#include "wpdkit/filtration.hpp"
#include "wpdkit/homology.hpp"
#include "wpdkit/io.hpp"
#include "wpdkit/report.hpp"
#include "wpdkit/verification.hpp"

using namespace wpdkit;
using nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, check_failed = 1, parse_failed = 2, invalid = 3, over_cap = 4, internal = 5 };

struct Config {
  std::string input;
  std::string input2;
  std::string format = "auto";
  int degree = 0;
  std::string p = "inf";
  int max_dim = 2;
  std::uint64_t seed = 0;
  double eps_eq = 1e-9;
  std::size_t cap = kDefaultExactCellCap;
  std::size_t bar_cap = kDefaultBarCap;
  std::string output;
  std::string suite;
  std::string example;
  bool all = false;
  bool zb = false;
};

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  double p = 0.0;
  try {
    std::size_t used = 0;
    p = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ValidationError("--p must be a number >= 1 or 'inf' (got '" + text + "')");
  }
  if (!(p >= 1.0) || std::isinf(p)) throw ValidationError("--p must be a number >= 1 or 'inf' (got '" + text + "')");
  return p;
}

Tolerances tolerances(const Config& c) {
  Tolerances t;
  t.eps_eq = c.eps_eq;
  return t;
}

MMSpace load(const std::string& path, const Config& c) {
  if (path.empty()) throw ValidationError("missing --input");
  return io::load_mm_space(path, io::parse_format(c.format), tolerances(c));
}

// Writes to --output through a temporary file and a rename, or to stdout.
void emit(const ordered_json& j, const Config& c) {
  const std::string text = j.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  const std::string tmp = c.output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, c.output);
}

int cmd_wpd(const Config& c) {
  const auto x = load(c.input, c);
  const int max_dim = std::max(c.max_dim, c.degree + 1);
  const auto wf = weighted_vr(x, max_dim, c.eps_eq);
  ordered_json out = io::to_json(weighted_pd(wf, c.degree));
  out["gdd"] = io::to_json(wf.grid_weights);
  emit(out, c);
  return ok;
}

int cmd_gdd(const Config& c) {
  const auto x = load(c.input, c);
  const auto g = gdd(x, c.eps_eq);
  ordered_json out;
  out["points"] = x.size();
  out["support"] = g.support();
  out["mass"] = g.mass();
  emit(out, c);
  return ok;
}

int cmd_filtration(const Config& c) {
  const auto x = load(c.input, c);
  const int max_dim = c.zb ? std::max(c.max_dim, c.degree + 1) : c.max_dim;
  const auto wf = weighted_vr(x, max_dim, c.eps_eq);
  ordered_json out = io::to_json(wf.filtration, &wf.grid_weights);
  if (c.zb) out["zb"] = io::to_json(zb_function(wf.filtration, c.degree));
  emit(out, c);
  return ok;
}

int cmd_compare(const Config& c) {
  if (c.input2.empty()) throw ValidationError("compare needs --input2");
  if (!c.suite.empty() && c.suite != "stability")
    throw ValidationError("unknown suite '" + c.suite + "' for compare (expected stability)");
  CompareOptions opt;
  opt.degree = c.degree;
  opt.p = parse_p(c.p);
  opt.max_dim = c.max_dim;
  opt.eps_eq = c.eps_eq;
  opt.exact_cells = c.cap;
  opt.bar_cap = c.bar_cap;
  opt.seed = c.seed;
  opt.stability = c.suite == "stability";
  emit(compare_report(load(c.input, c), load(c.input2, c), opt), c);
  return ok;
}

int cmd_verify(const Config& c) {
  std::vector<verify::CheckResult> results;
  if (!c.example.empty()) {
    results = verify::example(c.example);
  } else if (c.suite == "examples") {
    for (const auto& name : examples::names())
      for (auto r : verify::example(name)) {
        r.name = name + ": " + r.name;
        results.push_back(std::move(r));
      }
  } else if (c.suite.empty() || c.suite == "acceptance" || c.all) {
    verify::Options opt;
    opt.seed = c.seed;
    results = verify::acceptance(opt);
  } else {
    throw ValidationError("unknown suite '" + c.suite + "' for verify (expected acceptance or examples)");
  }
  bool passed = true;
  ordered_json summary = ordered_json::array();
  for (const auto& r : results) {
    passed = passed && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    summary.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (!c.output.empty()) emit({{"passed", passed}, {"checks", summary}}, c);
  return passed ? ok : check_failed;
}

int fail(int code, const std::string& kind, const std::string& message, ordered_json extra = ordered_json::object()) {
  ordered_json err{{"error", kind}, {"message", message}};
  err.update(extra);
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted persistence diagrams of Vietoris-Rips filtrations and their distances"};
  app.require_subcommand(1);
  Config c;

  const auto add_common = [&](CLI::App* sub, bool two_inputs) {
    sub->add_option("--input", c.input, "distance matrix (CSV or JSON) or point cloud (CSV)");
    if (two_inputs) sub->add_option("--input2", c.input2, "second input");
    sub->add_option("--format", c.format, "input format: auto, matrix or points")->capture_default_str();
    sub->add_option("--degree", c.degree, "homology degree")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--max-dim", c.max_dim, "largest simplex dimension")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--eps-eq", c.eps_eq, "tolerance for equal distances")->capture_default_str();
    sub->add_option("--output", c.output, "write JSON here instead of stdout");
  };
  auto* wpd = app.add_subcommand("wpd", "weighted persistence diagram with its GDD");
  add_common(wpd, false);
  auto* gdd_cmd = app.add_subcommand("gdd", "global distribution of distances");
  add_common(gdd_cmd, false);
  auto* filt = app.add_subcommand("filtration", "Vietoris-Rips filtration");
  add_common(filt, false);
  filt->add_flag("--zb", c.zb, "include the birth-death table for --degree");
  auto* cmp = app.add_subcommand("compare", "distances between two inputs");
  add_common(cmp, true);
  cmp->add_option("--p", c.p, "order p >= 1 or inf")->capture_default_str();
  cmp->add_option("--seed", c.seed, "seed for the finite-p solvers")->capture_default_str();
  cmp->add_option("--cap", c.cap, "cell cap of the exact GH and GW_inf solvers")->capture_default_str();
  cmp->add_option("--bar-cap", c.bar_cap, "bar cap of the exact displacement distance")->capture_default_str();
  cmp->add_option("--suite", c.suite, "extra suite: stability");
  auto* ver = app.add_subcommand("verify", "acceptance suite and example reproductions");
  ver->add_flag("--all", c.all, "run the acceptance suite (default)");
  ver->add_option("--suite", c.suite, "acceptance or examples");
  ver->add_option("--example", c.example, "ums, hexagon or boutin-kemper");
  ver->add_option("--seed", c.seed, "seed of the randomized checks")->capture_default_str();
  ver->add_option("--output", c.output, "write a JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(parse_failed, "arguments", e.what());
  }

  try {
    if (*wpd) return cmd_wpd(c);
    if (*gdd_cmd) return cmd_gdd(c);
    if (*filt) return cmd_filtration(c);
    if (*cmp) return cmd_compare(c);
    return cmd_verify(c);
  } catch (const io::ParseError& e) {
    ordered_json extra = ordered_json::object();
    if (e.line()) extra["line"] = e.line();
    return fail(parse_failed, "parse", e.what(), extra);
  } catch (const CapExceededError& e) {
    return fail(over_cap, "cap", e.what(), {{"cap", e.cap_name()}});
  } catch (const ValidationError& e) {
    return fail(invalid, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(internal, "internal", e.what());
  }
}
