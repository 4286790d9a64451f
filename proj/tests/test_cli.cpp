#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gammoments/cli.hpp>

using namespace gammoments;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "gammoments");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) { return slurp(std::filesystem::path(GOLDEN_DIR) / name); }

}  // namespace

TEST_CASE("golden outputs") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
      {"seq_factorial.json", {"seq", "--family", "factorial", "--t", "2", "--n", "5", "--format", "json"}},
      {"seq_factorial.csv", {"seq", "--family", "factorial", "--t", "2", "--n", "5", "--format", "csv"}},
      {"classify_rgstable.json", {"classify", "--family", "rgstable", "--a", "1", "--m", "4"}},
      {"verify_malmsten.json", {"verify", "--identity", "malmsten_gamma", "--s", "1"}},
      {"density_t1.csv", {"density", "--target", "L_t", "--t", "1", "--count", "12", "--format", "csv"}},
      {"kp16_uniform.json", {"kp16", "--num", "1:1", "--den", "2:1", "--n", "4"}},
      {"bernstein_beta.json", {"bernstein", "--kind", "beta", "--a", "2", "--b", "3", "--s", "1", "--n", "6"}},
  };
  for (const auto& [file, args] : cases) {
    INFO(file);
    const auto first = call(args);
    CHECK(first.code == 0);
    CHECK(first.out == golden(file));
    CHECK(call(args).out == first.out);
  }
}

TEST_CASE("seq payload") {
  const auto r = call({"seq", "--family", "factorial", "--t", "2", "--n", "5"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["log_mu"].size() == 6);
  CHECK(std::fabs(j["results"]["mu"][5].get<double>() - 14400.0) < 1e-8);
}

TEST_CASE("classify verdict") {
  const auto j = nlohmann::json::parse(call({"classify", "--family", "rgstable", "--a", "1", "--m", "4"}).out);
  CHECK(j["results"]["verdict"] == "MI");
}

TEST_CASE("density thread count does not change the bytes") {
  const auto a = call({"density", "--t", "2", "--count", "16", "--threads", "1"});
  const auto b = call({"density", "--t", "2", "--count", "16", "--threads", "3"});
  CHECK(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["results"] == nlohmann::json::parse(b.out)["results"]);
}

TEST_CASE("exit codes and error payloads") {
  const auto unknown = call({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK_FALSE(unknown.err.empty());
  CHECK(call({"seq", "--family", "factorial", "--bogus", "1"}).code == 2);
  const auto bad = call({"seq", "--family", "factorial", "--t", "-1"});
  CHECK(bad.code == 2);
  CHECK(nlohmann::json::parse(bad.out)["error"]["kind"] == "usage");
  const auto dom = call({"seq", "--family", "rgstable", "--a", "2", "--m", "1"});
  CHECK(dom.code == 2);
  CHECK(nlohmann::json::parse(dom.out)["error"]["kind"] == "validation");
  CHECK(call({"classify", "--family", "rgstable", "--a", "1", "--m", "4", "--format", "csv"}).code == 2);
  CHECK(call({"density", "--t", "1", "--contour-c", "-3"}).code == 2);
  CHECK(call({"verify", "--identity", "malmsten_gamma", "--s", "1", "--tol", "1e-30"}).code == 1);
}

TEST_CASE("render") {
  cli::ReportEnvelope empty;
  empty.command = "seq";
  empty.warnings.push_back("nothing to report");
  const auto text = cli::render(empty, cli::Format::json);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["results"] == nlohmann::json::object());
  CHECK(j["warnings"][0] == "nothing to report");
  CHECK_THROWS_AS(cli::render(empty, cli::Format::csv), cli::format_error);
  CHECK(text.find("\"command\"") < text.find("\"results\""));
}

TEST_CASE("config file, flags win") {
  const auto dir = std::filesystem::temp_directory_path() / "gammoments_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"family": "factorial", "t": 3, "n": 4})";
  const auto a = nlohmann::json::parse(call({"seq", "--config", cfg.string()}).out);
  CHECK(a["inputs"]["t"] == 3);
  const auto b = nlohmann::json::parse(call({"seq", "--config", cfg.string(), "--t", "2"}).out);
  CHECK(b["inputs"]["t"] == 2);
  CHECK(b["results"]["log_mu"].size() == 5);
}

TEST_CASE("output file under the override directory") {
  const auto dir = std::filesystem::temp_directory_path() / "gammoments_cli_out";
  std::filesystem::create_directories(dir);
  ::setenv(cli::output_dir_variable, dir.c_str(), 1);
  const auto r = call({"seq", "--family", "ones", "--n", "3", "--output", "ones.json"});
  ::unsetenv(cli::output_dir_variable);
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "ones.json"))["command"] == "seq");
}
