#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string tmp = WPDKIT_TEST_TMP;

std::string write(const std::string& name, const std::string& text) {
  const std::string path = tmp + "/" + name;
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const std::string out = tmp + "/cli.out", err = tmp + "/cli.err";
  const std::string cmd = std::string(WPDKIT_CLI) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const json* find(const json& list, const std::string& metric) {
  for (const auto& e : list)
    if (e["metric"] == metric) return &e;
  return nullptr;
}

const std::string ums_x = write("ums_x.csv", "0,1,2,2\n1,0,2,2\n2,2,0,1\n2,2,1,0\n");
const std::string ums_y = write("ums_y.csv", "0,1,1,2\n1,0,1,2\n1,1,0,2\n2,2,2,0\n");
const std::string bk_x = write("bk_x.csv", "0,0\n1,1\n3,1\n4,0\n");
const std::string bk_y = write("bk_y.csv", "0,0\n3,1\n3,-1\n4,0\n");

}  // namespace

TEST_CASE("wpd") {
  const auto r = run("wpd --input " + ums_x + " --degree 0");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["bars"] == json::parse(R"([{"birth":0.0,"death":1.0,"mult":2},{"birth":0.0,"death":2.0,"mult":1}])"));
  CHECK(j["weights"].size() == 6);
  CHECK(j["weights"][0]["mass"] == 0.0625);
  CHECK(j["gdd"].size() == 3);

  const auto one = run("wpd --input " + write("one.csv", "0\n"));
  REQUIRE(one.code == 0);
  const auto o = json::parse(one.out);
  CHECK(o["bars"].empty());
  CHECK(o["weights"] == json::parse(R"([{"birth":0.0,"death":0.0,"mass":1.0}])"));

  const auto js = run("wpd --input " + write("m.json", R"({"n":2,"d":[[0,3],[3,0]]})"));
  REQUIRE(js.code == 0);
  CHECK(json::parse(js.out)["bars"].size() == 1);
}

TEST_CASE("error paths") {
  const auto bad = run("wpd --input " + write("bad.csv", "0,1\n1,0\n2,x\n"));
  CHECK(bad.code == 2);
  const auto e = json::parse(bad.err);
  CHECK(e["error"] == "parse");
  CHECK(e["line"] == 3);

  CHECK(run("wpd --input " + tmp + "/nope.csv").code == 2);
  CHECK(run("wpd --bogus").code == 2);
  const auto asym = run("wpd --format matrix --input " + write("asym.csv", "0,1\n2,0\n"));
  CHECK(asym.code == 3);
  CHECK(json::parse(asym.err)["error"] == "validation");
  CHECK(run("compare --input " + ums_x + " --input2 " + ums_y + " --p 0.5").code == 3);
  CHECK(run("compare --input " + ums_x).code == 3);
  CHECK(run("wpd --input " + ums_x + " --degree -1").code == 2);
  CHECK(run("verify --example nowhere").code == 3);

  // hexagon against a seven-point space needs 42 cells
  std::ostringstream hex, hey;
  const double s = std::sqrt(3.0) / 2;
  hex << "1,0\n0.5," << s << "\n-0.5," << s << "\n-1,0\n-0.5," << -s << "\n0.5," << -s << "\n";
  hey << hex.str() << "0.75," << s / 2 << "\n";
  const auto capped = run("compare --input " + write("hx.csv", hex.str()) + " --input2 " + write("hy.csv", hey.str()));
  CHECK(capped.code == 4);
  const auto c = json::parse(capped.err);
  CHECK(c["error"] == "cap");
  CHECK(c["cap"] == "exact_cells");
  CHECK(c["message"].get<std::string>().find("exact_cells") != std::string::npos);
}

TEST_CASE("compare") {
  const auto same = run("compare --input " + ums_x + " --input2 " + ums_x);
  REQUIRE(same.code == 0);
  const auto j = json::parse(same.out);
  for (const auto& d : j["distances"]) {
    CHECK(d["value"] == 0.0);
    CHECK(d["mode"] == "exact");
  }

  const auto st = run("compare --input " + ums_x + " --input2 " + ums_y + " --suite stability --p inf --degree 0");
  REQUIRE(st.code == 0);
  const auto sj = json::parse(st.out);
  REQUIRE(sj["stability"]["checks"].size() == 3);
  for (const auto& c : sj["stability"]["checks"]) CHECK(c["verdict"] == "HOLDS");
  const auto* gh = find(sj["distances"], "gh");
  const auto* edit = find(sj["edit_distances"], "edit_gh");
  REQUIRE(gh);
  REQUIRE(edit);
  CHECK((*edit)["factor"] == 2);
  CHECK((*edit)["value"].get<double>() == 2 * (*gh)["value"].get<double>());

  const auto bk = run("compare --input " + bk_x + " --input2 " + bk_y);
  REQUIRE(bk.code == 0);
  const auto bj = json::parse(bk.out);
  CHECK(std::abs((*find(bj["distances"], "wasserstein_gdd"))["value"].get<double>()) <= 1e-9);
  CHECK((*find(bj["distances"], "d_defo"))["value"].get<double>() > 0);

  const auto two = run("compare --input " + ums_x + " --input2 " + ums_y + " --p 2 --seed 3");
  REQUIRE(two.code == 0);
  const auto tj = json::parse(two.out);
  CHECK((*find(tj["distances"], "gw_p"))["mode"] == "upper_bound");
  CHECK((*find(tj["distances"], "d_defo_weighted"))["mode"] == "upper_bound");
  CHECK((*find(tj["edit_distances"], "edit_gw"))["of"] == "gw_p");
}

TEST_CASE("determinism and output files") {
  const std::string args = "compare --input " + ums_x + " --input2 " + ums_y + " --p 2 --seed 7 --suite stability";
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const std::string path = tmp + "/report.json";
  REQUIRE(run(args + " --output " + path).code == 0);
  CHECK(slurp(path) == a.out);
}

TEST_CASE("gdd and filtration") {
  const auto g = run("gdd --input " + ums_y);
  REQUIRE(g.code == 0);
  const auto j = json::parse(g.out);
  CHECK(j["support"] == json::parse("[0.0,1.0,2.0]"));
  CHECK(j["mass"][1] == 0.375);

  const auto f = run("filtration --input " + ums_x + " --zb --degree 1");
  REQUIRE(f.code == 0);
  const auto fj = json::parse(f.out);
  CHECK(fj["simplices"].size() == 14);
  CHECK(fj["zb"]["degree"] == 1);
  CHECK(fj["zb"]["zb"].size() == 6);
}

TEST_CASE("verify") {
  const auto ums = run("verify --example ums");
  CHECK(ums.code == 0);
  CHECK(ums.out.find("PASS PD_0 equal") != std::string::npos);
  CHECK(ums.out.find("FAIL") == std::string::npos);
  CHECK(run("verify --example hexagon").code == 0);
  CHECK(run("verify --example boutin-kemper").code == 0);
  CHECK(run("verify --suite examples").code == 0);
  const auto all = run("verify --all --output " + tmp + "/verify.json");
  CHECK(all.code == 0);
  CHECK(json::parse(slurp(tmp + "/verify.json"))["passed"] == true);
}
