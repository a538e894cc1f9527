// Exercises the installed command line surface end to end: exit codes,
// manifest determinism, and the validate round trip. Takes the dscfq binary
// path as argv[1] and works inside a scratch directory under the current
// working directory (ctest runs us in the build tree).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json manifest_files(const fs::path& dir) {
  return json::parse(slurp(dir / "manifest.json"))["files"];
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-dscfq>\n");
    return 2;
  }
  const std::string bin = argv[1];
  const fs::path root = fs::path("cli_test_scratch");
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string r = root.string();

  // determinism: same config and seed give byte-identical manifests
  check(run(bin + " run --seed 1 --duration 1 --out " + r + "/a") == 0,
        "run exits 0");
  check(run(bin + " run --seed 1 --duration 1 --out " + r + "/b") == 0,
        "second run exits 0");
  check(manifest_files(root / "a") == manifest_files(root / "b"),
        "repeated run reproduces every file digest");

  // validate round trip on the emitted trace
  check(run(bin + " validate " + r + "/a/trace_seed1.json --out " + r + "/v") == 0,
        "validate exits 0 on an emitted trace");
  json report = json::parse(slurp(root / "v" / "report.json"));
  check(report["clean"].get<bool>() && report["violations"].empty(),
        "validator finds the emitted trace clean");

  // a corrupted stored deviation must trip --strict
  json trace = json::parse(slurp(root / "a" / "trace_seed1.json"));
  for (auto& e : trace["events"]) {
    if (e[1] == "departure") {
      e[7] = 0.5;
      break;
    }
  }
  {
    std::ofstream out(root / "corrupt.json");
    out << trace.dump();
  }
  check(run(bin + " validate " + r + "/corrupt.json --strict --out " + r +
            "/vs") == 3,
        "validate --strict exits 3 on a corrupted trace");
  check(run(bin + " validate " + r + "/corrupt.json --out " + r + "/vn") == 0,
        "validate without --strict still exits 0");

  // config errors exit 2
  check(run(bin + " run --config " + r + "/missing.json") == 2,
        "missing config exits 2");
  check(run(bin + " run --algo bogus") == 2, "unknown --algo exits 2");
  check(run(bin + " run --alpha nonsense") == 2, "bad --alpha exits 2");
  check(run(bin + " frobnicate") == 2, "unknown subcommand exits 2");
  {
    std::ofstream out(root / "bad.json");
    out << "{\"seeds\": []}";
  }
  check(run(bin + " run --config " + r + "/bad.json") == 2,
        "empty seed list exits 2");

  // environment variable steers the output directory; an explicit --out wins
  check(run("DSCFQ_OUT_DIR=" + r + "/env " + bin + " analyze") == 0,
        "analyze with DSCFQ_OUT_DIR exits 0");
  check(fs::exists(root / "env" / "analyze.json"),
        "outputs land in DSCFQ_OUT_DIR");
  check(run("DSCFQ_OUT_DIR=" + r + "/ignored " + bin + " analyze --out " + r +
            "/flag") == 0 &&
            fs::exists(root / "flag" / "analyze.json") &&
            !fs::exists(root / "ignored"),
        "--out overrides DSCFQ_OUT_DIR");

  // compare honours the window list and emits all three schedulers
  check(run(bin + " compare --duration 1 --seed 1 --windows 30 --out " + r +
            "/c") == 0,
        "compare exits 0");
  {
    std::string csv = slurp(root / "c" / "compare.csv");
    check(csv.find("dscfq") != std::string::npos &&
              csv.find("type1") != std::string::npos &&
              csv.find("type2") != std::string::npos,
          "compare emits every scheduler kind");
    check(csv.find(",50,") == std::string::npos,
          "compare restricts itself to the requested windows");
  }

  if (g_failures == 0) fs::remove_all(root);
  std::printf("%s (%d failures)\n", g_failures == 0 ? "all ok" : "FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
