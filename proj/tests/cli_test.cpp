#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "helpers.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string temp_file(const std::string& stem) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path();
  return (dir / (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++)))
      .string();
}

// Runs the installed binary through the shell, capturing both streams.
RunResult run_cli(const std::string& args) {
  std::string out_path = temp_file("cli_out");
  std::string err_path = temp_file("cli_err");
  std::string cmd =
      std::string("\"") + FCT_BIN + "\" " + args + " >" + out_path + " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

std::string quoted_fixture(const std::string& name) {
  return "\"" + fixture_path(name) + "\"";
}

std::string write_temp(const std::string& stem, const std::string& content) {
  std::string path = temp_file(stem);
  std::ofstream out(path);
  out << content;
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("generating set output matches the documented line") {
  RunResult r = run_cli("invariants " + quoted_fixture("metro.json") + " --format json");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "{\"monomials\":[\"s_1_2\",\"s_2_3\"],\"tetrads\":[\"s_1_5*s_3_4 - s_1_4*s_3_5\"],"
        "\"hexads\":[]}\n");
  CHECK(r.err.empty());
}

TEST_CASE("dimension report round trips as json") {
  RunResult r = run_cli("dim " + quoted_fixture("metro.json") + " --format json");
  REQUIRE(r.status == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.out);
  CHECK(j.dump() + "\n" == r.out);
  CHECK(j["expected"] == 12);
  CHECK(j["exact"] == 12);
  CHECK(j["upper"] == 12);
  CHECK(j["lower"] == 12);
  CHECK(j["defective"] == false);
  CHECK(j["trials"] == 3);

  SECTION("table format mentions the same numbers") {
    RunResult t = run_cli("dim " + quoted_fixture("metro.json"));
    CHECK(t.status == 0);
    CHECK(t.out.find("expected                12") != std::string::npos);
    CHECK(t.out.find("defective               no") != std::string::npos);
  }
}

TEST_CASE("bounds output carries exactly the combinatorial fields") {
  RunResult r = run_cli("bounds " + quoted_fixture("metro.json") + " --format json");
  REQUIRE(r.status == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"expected", "zero_pattern_bound", "upper", "lower",
                                         "lower_exhaustive", "witness_upper", "witness_lower"});
  CHECK(j["upper"] == 12);
}

TEST_CASE("ordering with witnesses") {
  RunResult r = run_cli("zuta " + quoted_fixture("metro.json"));
  CHECK(r.status == 0);
  CHECK(r.out == "order: h1 h2\nwitnesses: 1 2\n");

  SECTION("json form") {
    RunResult j = run_cli("zuta " + quoted_fixture("metro.json") + " --format json");
    CHECK(j.status == 0);
    nlohmann::ordered_json parsed = nlohmann::ordered_json::parse(j.out);
    CHECK(parsed["latent_order"] == nlohmann::ordered_json::array({"h1", "h2"}));
    CHECK(parsed["witnesses"] == nlohmann::ordered_json::array({"1", "2"}));
  }

  SECTION("graphs without an ordering print none") {
    std::string twins = write_temp("twins", R"({
      "observed": ["1", "2"],
      "latent": ["h1", "h2"],
      "edges": [["h1", "1"], ["h1", "2"], ["h2", "1"], ["h2", "2"]]
    })");
    RunResult t = run_cli("zuta \"" + twins + "\"");
    CHECK(t.status == 0);
    CHECK(t.out == "none\n");
    RunResult tj = run_cli("zuta \"" + twins + "\" --format json");
    CHECK(tj.out == "null\n");
    std::filesystem::remove(twins);
  }
}

TEST_CASE("verification lists one line per polynomial") {
  RunResult r = run_cli("verify " + quoted_fixture("overlap2_p7.json") + " --poly-file " +
                        quoted_fixture("overlap2_p7_hexads.txt"));
  REQUIRE(r.status == 0);
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  for (const auto& line : lines) CHECK(line.rfind("OK ", 0) == 0);

  SECTION("failures are reported without failing the run") {
    std::string polys = write_temp("polys", "s_1_2\ns_4_5\n");
    RunResult f =
        run_cli("verify " + quoted_fixture("overlap2_p7.json") + " --poly-file \"" + polys + "\"");
    CHECK(f.status == 0);
    std::vector<std::string> out = lines_of(f.out);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "FAIL s_1_2");
    CHECK(out[1] == "FAIL s_4_5");
    std::filesystem::remove(polys);
  }
}

TEST_CASE("numeric search over a restricted support") {
  RunResult r = run_cli("oracle " + quoted_fixture("metro.json") + " --degree 1 --format json");
  REQUIRE(r.status == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["degree"] == 1);
  std::vector<std::string> certified = j["certified"].get<std::vector<std::string>>();
  std::sort(certified.begin(), certified.end());
  CHECK(certified == std::vector<std::string>{"s_1_2", "s_2_3"});

  RunResult sup = run_cli("oracle " + quoted_fixture("metro.json") +
                          " --degree 1 --support 1_2 --format json");
  REQUIRE(sup.status == 0);
  nlohmann::ordered_json js = nlohmann::ordered_json::parse(sup.out);
  CHECK(js["certified"] == nlohmann::ordered_json::array({"s_1_2"}));
}

TEST_CASE("warnings go to the error stream") {
  std::string lonely = write_temp("lonely", R"({
    "observed": ["1", "2"],
    "latent": ["h1", "h9"],
    "edges": [["h1", "1"], ["h1", "2"]]
  })");
  RunResult r = run_cli("dim \"" + lonely + "\" --format json");
  CHECK(r.status == 0);
  CHECK(r.err.find("h9") != std::string::npos);
  CHECK(r.out.find("h9") == std::string::npos);
  CHECK_NOTHROW(nlohmann::ordered_json::parse(r.out));
  std::filesystem::remove(lonely);
}

TEST_CASE("exit codes distinguish failure classes") {
  SECTION("usage and input problems exit with one") {
    CHECK(run_cli("dim /no/such/file.json").status == 1);
    std::string broken = write_temp("broken", "this is not json");
    CHECK(run_cli("dim \"" + broken + "\"").status == 1);
    std::filesystem::remove(broken);
    CHECK(run_cli("").status == 1);
    CHECK(run_cli("dim").status == 1);
    CHECK(run_cli("dim " + quoted_fixture("metro.json") + " --format yaml").status == 1);
    CHECK(run_cli("dim " + quoted_fixture("metro.json") + " --no-such-flag").status == 1);
    CHECK(run_cli("verify " + quoted_fixture("metro.json")).status == 1);
    CHECK(run_cli("dim " + quoted_fixture("metro.json") + " --trials 0").status == 1);

    std::string diag = write_temp("diag", "s_1_1\n");
    CHECK(run_cli("verify " + quoted_fixture("metro.json") + " --poly-file \"" + diag + "\"")
              .status == 1);
    std::filesystem::remove(diag);
  }

  SECTION("shapes without closed form generators are refused with two") {
    RunResult chain = run_cli("invariants " + quoted_fixture("chain3_p8.json"));
    CHECK(chain.status == 2);
    CHECK(chain.err.find("oracle") != std::string::npos);

    RunResult wide = run_cli("invariants " + quoted_fixture("overlap3_p7.json"));
    CHECK(wide.status == 2);
    CHECK(wide.err.find("oracle") != std::string::npos);

    CHECK(run_cli("invariants " + quoted_fixture("full2f_p5.json")).status == 2);

    std::string single = write_temp("single", R"({
      "observed": ["1", "2", "3"],
      "latent": ["h1"],
      "edges": [["h1", "1"], ["h1", "2"], ["h1", "3"]]
    })");
    CHECK(run_cli("invariants \"" + single + "\"").status == 2);
    std::filesystem::remove(single);
  }

  SECTION("blowing the monomial budget exits with three") {
    RunResult r = run_cli("oracle " + quoted_fixture("overlap2_p7.json") +
                          " --degree 3 --cap 5 --format json");
    CHECK(r.status == 3);
    CHECK(r.err.find("error") != std::string::npos);
  }

  SECTION("help exits cleanly") {
    CHECK(run_cli("--help").status == 0);
  }
}
