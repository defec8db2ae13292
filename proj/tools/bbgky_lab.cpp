#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bbgky/experiment.hpp"

namespace {

int execute(const std::string& path, const std::string& out, const bbgky::Scenario* forced) {
  try {
    bbgky::SystemConfig config = bbgky::load_config(path);
    if (forced) config.scenario = *forced;
    const bbgky::RunRecord record = bbgky::run_scenario(config, out);
    for (const auto& row : record.rows)
      std::printf("%s  %-58s %.3e (bound %.3e)  [%s]\n", row.pass ? "PASS" : "FAIL",
                  row.name.c_str(), row.value, row.bound, row.tag.c_str());
    std::printf("scenario %s: %zu rows, %zu failed, %.2f s, results in %s\n",
                record.scenario.c_str(), record.rows.size(), record.failures().size(),
                record.wall_seconds, out.c_str());
    return record.passed() ? 0 : 1;
  } catch (const bbgky::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-particle BBGKY and correlation hierarchy laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    return sub;
  };
  CLI::App* run = add("run", "Run the scenario named in the config");
  CLI::App* verify = add("verify", "Run the verification suite");
  CLI::App* meanfield = add("meanfield", "Run the mean-field scaling scenario");

  CLI11_PARSE(app, argc, argv);

  static const bbgky::Scenario kVerify = bbgky::Scenario::Verify;
  static const bbgky::Scenario kMeanfield = bbgky::Scenario::Meanfield;
  if (run->parsed()) return execute(config_path, out_dir, nullptr);
  if (verify->parsed()) return execute(config_path, out_dir, &kVerify);
  if (meanfield->parsed()) return execute(config_path, out_dir, &kMeanfield);
  return 1;
}
