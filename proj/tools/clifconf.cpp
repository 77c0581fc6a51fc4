#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "clifconf/cli.hpp"

namespace cli = clifconf::cli;

int main(int argc, char** argv) {
  cli::RunConfig cfg;
  std::string config_path;
  std::map<std::string, CLI::Option*> opts;

  CLI::App app{"clifconf: Clifford algebra and conformal weight checks"};
  app.set_help_flag("--help", "print help and exit");
  app.fallthrough();
  app.require_subcommand(1);
  opts["n"] = app.add_option("--n", cfg.n, "dimension");
  opts["mode"] = app.add_option("--mode", cfg.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  opts["format"] = app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  opts["out"] = app.add_option("--out", cfg.out, "write the report here instead of stdout");
  opts["seed"] = app.add_option("--seed", cfg.seed, "seed for random property checks");
  opts["tol"] = app.add_option("--tol", cfg.tol, "tolerance (float mode only)");
  app.add_option("--config", config_path, "JSON file with default flag values")->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "run the identity suite for one n");
  opts["perturb"] = verify->add_option("--perturb", cfg.perturb, "fault injection: sigma-const");

  auto* weight = app.add_subcommand("weight", "conformal weight of a symbol");
  opts["symbol"] = weight->add_option("--symbol", cfg.symbol, "skew, sym0, trace, clifford, hodge, rarita, rarita-j");
  opts["j"] = weight->add_option("--j", cfg.j, "symmetric power for rarita-j");

  app.add_subcommand("gamma", "gamma matrices, Phi and the spinor decomposition");

  auto* rarita = app.add_subcommand("rarita", "twisted Dirac operator on ker(epsilon)");
  rarita->add_option("--j", cfg.j, "symmetric power");

  auto* grid = app.add_subcommand("grid", "finite-difference checks on a flat grid");
  opts["h"] = grid->add_option("--h", cfg.hs, "grid spacings, comma separated")->delimiter(',');
  opts["test"] = grid->add_option("--test", cfg.test, "dirac-invariance, hodge-noninvariance, cauchy, kelvin, convergence");
  opts["omega"] = grid->add_option("--omega", cfg.omega, "conformal factor: exp or sphere")->check(CLI::IsMember({"exp", "sphere"}));
  opts["w"] = grid->add_option("--w", cfg.w, "weight to test, e.g. -1 or -3/2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "rarita" && rarita->count("--j") > 0) opts["j"] = rarita->get_option("--j");

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw cli::UsageError(std::string("config: ") + e.what());
      }
      std::vector<std::string> given;
      for (const auto& [key, opt] : opts)
        if (opt->count() > 0) given.push_back(key);
      cli::apply_config(cfg, j, given);
    }
    const auto report = cli::run(cfg);
    const std::string text = cli::render(report, cfg.format);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!out) throw cli::UsageError("cannot write " + cfg.out);
      out << text;
    }
    return report.exit_status();
  } catch (const std::invalid_argument& e) {
    std::cerr << "clifconf: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "clifconf: error: " << e.what() << "\n";
    return cli::kExitFail;
  }
}
