#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doikit/error.hpp"
#include "doikit/experiment.hpp"
#include "doikit/io.hpp"

using namespace doikit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "doikit_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::ExperimentConfig config(const std::string& text, const fs::path& base = {}) {
  return cli::parse_config(json::parse(text), base);
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

#ifdef DOICTL_PATH
int doictl(const std::string& args) {
  const int status = std::system((std::string(DOICTL_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST(Config, Defaults) {
  const auto c = config(R"({"suite":"holder"})");
  EXPECT_EQ(c.suite, cli::Suite::Holder);
  EXPECT_EQ(c.dims, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(c.modes.size(), 3u);
  EXPECT_EQ(c.seed, 1u);
}

TEST(Config, ScalarsBecomeLists) {
  const auto c = config(R"({"suite":"schatten","alpha":0.25,"p":[1.5,4],"eps":0.1})");
  EXPECT_EQ(c.alphas, (std::vector<double>{0.25}));
  EXPECT_EQ(c.ps, (std::vector<double>{1.5, 4.0}));
  EXPECT_EQ(c.eps, (std::vector<double>{0.1}));
}

TEST(Config, Rejections) {
  for (const char* bad : {R"([])", R"({})", R"({"suite":"nope"})", R"({"suite":"holder","alpha":1})",
                          R"({"suite":"holder","dims":[]})", R"({"suite":"holder","dims":[0]})",
                          R"({"suite":"holder","modes":["diagonal"]})", R"({"suite":"holder","eps":[0]})",
                          R"({"suite":"schatten","p":1})", R"({"suite":"holder","sedd":3})",
                          R"({"suite":"search"})", R"({"suite":"holder","tag":"holder"})",
                          R"({"suite":"omega","omega":{"kind":"power","alpha":1}})",
                          R"({"suite":"key_ineq","symbol":"abs_power"})", R"({"suite":"holder","symbol":"sinc"})",
                          R"({"suite":"holder","symbol":{"file":"missing.json"}})",
                          R"({"suite":"holder","seed":-4})", R"({"suite":"holder","repeats":0})"}) {
    EXPECT_EQ(code_of([&] { config(bad); }), Errc::ConfigInvalid) << bad;
  }
  EXPECT_NO_THROW(config(R"({"suite":"quasicommutator","alpha":1})"));
}

TEST(Config, SymbolFileResolvesRelativeToConfig) {
  const fs::path dir = workdir("symfile");
  io::write_text_file(dir / "poly.json", R"({"terms":[{"a":1,"b":0,"re":1,"im":0}]})");
  const auto c = config(R"({"suite":"key_ineq","symbol":{"file":"poly.json"}})", dir);
  EXPECT_TRUE(cli::make_symbol(*c.symbol, dir).band_limited());
}

TEST(Symbols, BuiltinLibrary) {
  for (const char* name : {"identity", "conjugate", "real_part", "imag_part", "abs_squared", "abs_power",
                           "capped_abs", "complex_power", "exponential", "random_trig", "piecewise_smooth"}) {
    EXPECT_NO_THROW(cli::make_symbol(json(name))) << name;
  }
  const auto e = cli::make_symbol(json::parse(R"({"builtin":"exponential","a":3,"b":4})"));
  ASSERT_TRUE(e.band_limited());
  EXPECT_EQ(band_radius(*e.trig), 5.0);
}

TEST(Run, IdentitySuiteSmallDefect) {
  const auto out = cli::execute(config(R"({"suite":"identity","dims":[2,4,8],"seed":7})"));
  ASSERT_EQ(out.manifest.suites.size(), 1u);
  const auto& s = out.manifest.suites[0];
  EXPECT_TRUE(s.passed);
  ASSERT_TRUE(s.max_defect.has_value());
  EXPECT_LE(*s.max_defect, 1e-8);
  EXPECT_EQ(out.manifest.exit_code(), 0);
  EXPECT_EQ(out.report.at("reports").size(), s.trials);
}

TEST(Run, HolderScalarWitnessRow) {
  const auto out = cli::execute(config(R"({"suite":"holder","dims":[1],"alpha":0.5,"eps":[1e-3]})"));
  bool found = false;
  for (const auto& r : out.report.at("reports")) {
    if (std::abs(r.at("ratio").get<double>() - 1.0) <= 1e-9) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(out.manifest.passed());
}

TEST(Run, CsvHeaderAndRowCount) {
  const auto out = cli::execute(config(R"({"suite":"weak","dims":[2,3],"eps":[1]})"));
  std::istringstream in(out.csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "tag,dim,mode,eps,alpha,p,l,ratio,numerator,denominator,seed");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, out.report.at("reports").size());
}

TEST(Run, ParallelMatchesSequential) {
  const auto c = config(R"({"suite":"quasicommutator","dims":[2,3],"eps":[1,0.01],"seminorm_budget":64})");
  cli::RunOptions one, four;
  four.jobs = 4;
  EXPECT_EQ(cli::execute(c, one).report.dump(), cli::execute(c, four).report.dump());
}

TEST(Run, SeedOverrideChangesDigest) {
  const auto c = config(R"({"suite":"identity","dims":[2]})");
  cli::RunOptions a, b;
  b.seed = 99;
  EXPECT_NE(cli::execute(c, a).manifest.config_digest, cli::execute(c, b).manifest.config_digest);
}

TEST(Run, FailingCheckSetsExitCode) {
  cli::RunManifest m;
  m.suites.push_back({"identity", false, 1, 0, 1, 1, 1.0});
  EXPECT_EQ(m.exit_code(), cli::kExitAssertion);
}

TEST(Run, WritesFilesDeterministically) {
  const fs::path dir = workdir("determinism");
  const auto c = config(R"({"suite":"schatten","dims":[2,3],"p":[2,4],"seminorm_budget":64})");
  cli::RunOptions a, b;
  a.output = dir / "a";
  b.output = dir / "b";
  b.jobs = 3;
  cli::run(c, a);
  cli::run(c, b);
  EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
  EXPECT_EQ(slurp(dir / "a" / "report.csv"), slurp(dir / "b" / "report.csv"));
  const json manifest = json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest.at("tool_version"), std::string(cli::kToolVersion));
  EXPECT_TRUE(manifest.contains("started_at"));
}

TEST(Plotdata, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(cli::plotdata_csv(json::object()), "series,tag,case,alpha,p,x,y,w\n");
  EXPECT_EQ(cli::plotdata_csv(json::parse(R"({"reports":[],"weak_tables":[]})")), "series,tag,case,alpha,p,x,y,w\n");
}

TEST(Plotdata, WeakTableProjection) {
  const auto out = cli::execute(config(R"({"suite":"weak","dims":[3],"eps":[0.5],"alpha":0.5})"));
  const std::string csv = cli::plotdata_csv(out.report);
  const auto& table = out.report.at("weak_tables").at(0).at("rows");
  std::istringstream in(csv);
  std::string line;
  std::size_t sj = 0;
  while (std::getline(in, line)) {
    if (line.rfind("sj_decay", 0) != 0) continue;
    const auto& row = table.at(sj);
    std::ostringstream expect;
    expect << "sj_decay,weak,0,0.5,," << row.at("j").get<std::size_t>() << ","
           << cli::format_double(row.at("s").get<double>()) << "," << cli::format_double(row.at("w").get<double>());
    EXPECT_EQ(line, expect.str());
    ++sj;
  }
  EXPECT_EQ(sj, 3u);
}

TEST(Plotdata, EpsColumnMonotone) {
  const auto out = cli::execute(config(R"({"suite":"holder","dims":[2],"eps":[1e-4,1,1e-2,1e-6],"alpha":[0.25,0.75],"seminorm_budget":64})"));
  std::istringstream in(cli::plotdata_csv(out.report));
  std::string line;
  std::string group;
  double last = INFINITY;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("ratio_vs_eps", 0) != 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    const std::string g = f[1] + f[3] + f[4];
    const double eps = std::stod(f[5]);
    if (g != group) {
      group = g;
      last = INFINITY;
    }
    EXPECT_LT(eps, last);
    last = eps;
    ++rows;
  }
  EXPECT_EQ(rows, 8u);
}

TEST(Plotdata, MissingReport) {
  EXPECT_EQ(code_of([] { cli::emit_plotdata("/nonexistent/report.json", "/tmp/x.csv"); }), Errc::IoError);
}

#ifdef DOICTL_PATH
TEST(Doictl, ExitCodes) {
  const fs::path dir = workdir("exit");
  io::write_text_file(dir / "ok.json", R"({"suite":"identity","dims":[2,3],"seed":7})");
  io::write_text_file(dir / "bad.json", R"({"suite": "identity", )");
  io::write_text_file(dir / "invalid.json", R"({"suite":"identity","dims":[0]})");
  EXPECT_EQ(doictl("run " + (dir / "ok.json").string() + " --out " + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "manifest.json"));
  EXPECT_EQ(doictl("run " + (dir / "bad.json").string() + " --out " + (dir / "bad").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "bad"));
  EXPECT_EQ(doictl("run " + (dir / "invalid.json").string() + " --out " + (dir / "inv").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "inv"));
  EXPECT_EQ(doictl("run " + (dir / "missing.json").string()), 2);
  // output location is a regular file
  io::write_text_file(dir / "blocker", "x");
  EXPECT_EQ(doictl("run " + (dir / "ok.json").string() + " --out " + (dir / "blocker").string()), 3);
  EXPECT_EQ(doictl("plotdata " + (dir / "ok" / "report.json").string() + " " + (dir / "plot.csv").string()), 0);
  EXPECT_EQ(doictl("plotdata " + (dir / "nope.json").string() + " " + (dir / "plot2.csv").string()), 3);
}
#endif
