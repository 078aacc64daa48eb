#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

// Black-box tests of the command-line binary: exit-code contract, output
// formats, JSON-schema conformance and byte determinism.  The binary path
// and schema directory are baked in at configure time.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr merged
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ADEH_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("adeh_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_schema(const std::string& name) {
  return json::parse(slurp(fs::path(ADEH_SCHEMA_DIR) / name));
}

// Minimal JSON-schema walker covering the subset the shipped schemas use:
// type, properties, required, items, enum, additionalProperties: false.
void walk_schema(const json& schema, const json& value,
                 const std::string& path, std::vector<std::string>& errs) {
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& v : schema["enum"]) hit = hit || v == value;
    if (!hit) errs.push_back(path + ": not in enum");
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    const bool ok = (t == "object" && value.is_object()) ||
                    (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "number" && value.is_number()) ||
                    (t == "boolean" && value.is_boolean());
    if (!ok) {
      errs.push_back(path + ": expected type " + t);
      return;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errs.push_back(path + ": missing required key " +
                         key.get<std::string>());
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        walk_schema(props[key], sub, path + "." + key, errs);
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"] == false) {
        errs.push_back(path + ": unexpected key " + key);
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < value.size(); ++i)
      walk_schema(schema["items"], value[i], path + "[" + std::to_string(i) +
                  "]", errs);
  }
}

void check_against_schema(const json& doc, const std::string& schema_name) {
  std::vector<std::string> errs;
  walk_schema(load_schema(schema_name), doc, "$", errs);
  for (const auto& e : errs) FAIL_CHECK(e);
  CHECK(errs.empty());
}

}  // namespace

TEST_CASE("types: listing rows carry the Coxeter table") {
  const auto res = run_cli("types");
  CHECK(res.exit_code == 0);
  std::istringstream lines(res.output);
  std::string line;
  int rows = 0;
  bool a3 = false, e6 = false, d4 = false;
  while (std::getline(lines, line)) {
    if (line.rfind("A_3", 0) == 0) {
      a3 = line.find("1,2,3") != std::string::npos &&
           line.find('4') != std::string::npos;
    }
    if (line.rfind("E_6", 0) == 0)
      e6 = line.find("12") != std::string::npos;
    if (line.rfind("D_4", 0) == 0)
      d4 = line.find("1,3,3,5") != std::string::npos;
    if (line.rfind("A_", 0) == 0 || line.rfind("D_", 0) == 0 ||
        line.rfind("E_", 0) == 0)
      ++rows;
  }
  CHECK(rows == 16);
  CHECK(a3);
  CHECK(e6);
  CHECK(d4);
}

TEST_CASE("coeffs A_1: exact eighth, schema-valid JSON, exit 0") {
  const fs::path out = temp_dir() / "a1.json";
  const auto res = run_cli("coeffs A_1 --output " + out.string());
  CHECK(res.exit_code == 0);

  const json doc = json::parse(slurp(out));
  check_against_schema(doc, "coeffs_report.schema.json");
  CHECK(doc["type"] == "A_1");
  CHECK(doc["theorem_pass"] == true);
  CHECK(doc["target"] == "1/8");
  REQUIRE(doc["orbits"].size() == 1);
  CHECK(doc["orbits"][0]["a_exact"]["rational"] == "1/8");
  CHECK(doc["orbits"][0]["a_rational"] == "1/8");
  const std::string tilde = doc["orbits"][0]["a_tilde"];
  CHECK(tilde.rfind("1.25000", 0) == 0);
}

TEST_CASE("coeffs A_4: irrational coefficients serialize as coordinates") {
  const fs::path out = temp_dir() / "a4.json";
  const auto res = run_cli("coeffs A_4 --output " + out.string());
  CHECK(res.exit_code == 0);
  const json doc = json::parse(slurp(out));
  check_against_schema(doc, "coeffs_report.schema.json");
  REQUIRE(doc["orbits"].size() == 4);
  int with_coords = 0;
  for (const auto& orb : doc["orbits"]) {
    CHECK_FALSE(orb.contains("a_rational"));
    if (orb["a_exact"].contains("coords")) {
      ++with_coords;
      CHECK(orb["a_exact"]["conductor"] == 5);
    }
  }
  CHECK(with_coords == 4);
  CHECK(doc["theorem_pass"] == true);
}

TEST_CASE("coeffs D_4 --format csv: header plus one row per orbit") {
  const auto res = run_cli("coeffs D_4 --format csv");
  CHECK(res.exit_code == 0);
  std::istringstream lines(res.output);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line))
    if (!line.empty()) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        "type,orbit,rep,a_exact,a_value,a_tilde,residual,theorem_pass");
  CHECK(rows[1].find("1/72") != std::string::npos);
  for (size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r].rfind("D_4,", 0) == 0);
    CHECK(rows[r].find("true") != std::string::npos);
  }
}

TEST_CASE("exit-code contract") {
  CHECK(run_cli("coeffs Q_5").exit_code == 2);          // bad label
  CHECK(run_cli("coeffs").exit_code == 2);              // missing argument
  CHECK(run_cli("nonsense").exit_code == 2);            // unknown subcommand
  CHECK(run_cli("coeffs A_1 --digits 10").exit_code == 2);  // out of range
  CHECK(run_cli("coeffs A_1 --format xml").exit_code == 2);
  CHECK(run_cli("hirota A_1 --tau garbage").exit_code == 2);
  CHECK(run_cli("hirota A_1 --tau 'poly:y(1,0)^'").exit_code == 2);
  CHECK(run_cli("hirota A_1 --tau 'soliton:1'").exit_code == 2);

  // Verification failures exit 1, distinct from usage errors.
  CHECK(run_cli("coeffs A_2 --perturb a:1e-10").exit_code == 1);
  CHECK(run_cli("hirota A_1 --tau 'poly:y(1,0)^2' --weight 5").exit_code == 1);

  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("coeffs --help").exit_code == 0);
}

TEST_CASE("hirota: vacuum and soliton pass, square control fails") {
  CHECK(run_cli("hirota A_1 --tau one --weight 5").exit_code == 0);
  CHECK(run_cli("hirota A_1 --tau soliton:1,1 --weight 7").exit_code == 0);
  CHECK(run_cli("hirota A_1 --tau 'poly:y(1,0)' --weight 6").exit_code == 0);
  CHECK(run_cli("hirota A_2 --tau one --weight 5").exit_code == 0);

  const fs::path out = temp_dir() / "square.json";
  const auto res = run_cli(
      "hirota A_1 --tau 'poly:y(1,0)^2' --weight 6 --output " + out.string());
  CHECK(res.exit_code == 1);
  const json doc = json::parse(slurp(out));
  check_against_schema(doc, "hirota_report.schema.json");
  CHECK(doc["zero_to_certified"] == false);
  CHECK(doc["first_nonzero_weight"] == 4);
  CHECK(doc["certified_weight"] == 6);
  REQUIRE(doc["nonzero_components"].size() >= 1);
  CHECK(doc["nonzero_components"][0]["weight"] == 4);
  CHECK(doc["nonzero_components"][0]["terms"] == 9);
}

TEST_CASE("verify_all: filtered run passes and writes a schema-valid report") {
  const fs::path out = temp_dir() / "verify.json";
  const auto res = run_cli("verify_all --types A_1 --order 8 --weight 4 " +
                           ("--output " + out.string()));
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("PASS") != std::string::npos);
  CHECK(res.output.find("FAIL") == std::string::npos);
  CHECK(res.output.find("all suites passed") != std::string::npos);
  CHECK(res.output.find("E_6") == std::string::npos);  // filter respected

  const json doc = json::parse(slurp(out));
  check_against_schema(doc, "verify_report.schema.json");
  CHECK(doc["all_pass"] == true);
  for (const auto& suite : doc["suites"]) {
    CHECK(suite["pass"] == true);
    const std::string name = suite["name"];
    // Per-type suites carry "A_1"; the A_1-only extras are prefixed "a1".
    const bool tagged = name.find("A_1") != std::string::npos ||
                        name.find("a1") != std::string::npos;
    CHECK(tagged);
  }

  const auto bad =
      run_cli("verify_all --types A_2 --order 8 --weight 4 --perturb a:1e-10");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("verification failed") != std::string::npos);
}

TEST_CASE("a1_phase: study csv and the direct 1/8") {
  const fs::path out = temp_dir() / "phase.csv";
  const auto res = run_cli("a1_phase --digits 40 --output " + out.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("a_tilde_a1_direct = 1.25") != std::string::npos);

  const std::string csv = slurp(out);
  CHECK(csv.rfind("s,epsilon,closed_form,quadrature,abs_diff", 0) == 0);
  // Grid rows: eps = 0 column, s = 0 rows, diagonal.
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 14);
}

TEST_CASE("reports are byte-deterministic across runs") {
  const fs::path out1 = temp_dir() / "det1.json";
  const fs::path out2 = temp_dir() / "det2.json";
  REQUIRE(run_cli("coeffs A_3 --output " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("coeffs A_3 --output " + out2.string()).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));

  const fs::path h1 = temp_dir() / "deth1.json";
  const fs::path h2 = temp_dir() / "deth2.json";
  REQUIRE(run_cli("hirota A_1 --tau soliton:1,1 --weight 6 --output " +
                  h1.string()).exit_code == 0);
  REQUIRE(run_cli("hirota A_1 --tau soliton:1,1 --weight 6 --output " +
                  h2.string()).exit_code == 0);
  CHECK(slurp(h1) == slurp(h2));
}
