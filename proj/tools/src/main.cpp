#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fracnls/version.hpp"
#include "fracnls_app/app.hpp"

int main(int argc, char** argv) {
  using namespace fracnls::app;
  CLI::App app{"Ground states of the fractional Schrodinger equation D_right^a D_left^a u + V u = f(u)"};
  app.set_version_flag("--version", fracnls::kVersion);
  app.require_subcommand(1);

  CommonOptions opt;
  std::uint64_t seed = 0;
  bool no_refine = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override solver.seed");
    sub->add_flag("--refine", opt.refine, "re-run at 2N and 2L (default)");
    sub->add_flag("--no-refine", no_refine, "skip the 2N / 2L re-runs");
  };

  auto* gs = app.add_subcommand("ground-state", "converge one ground state and write JSON + profile CSV");
  add_common(gs);

  auto* sweep = app.add_subcommand("sweep", "ground states over a parameter list, one CSV row per value");
  add_common(sweep);
  std::string param;
  std::string values;
  sweep->add_option("--jobs", opt.jobs, "parallel sweep points")->check(CLI::PositiveNumber);
  sweep->add_option("--param", param, "epsilon, alpha, p, L, N or Vinf");
  sweep->add_option("--values", values, "comma-separated sweep values (overrides the config)");

  auto* verify = app.add_subcommand("verify", "run a property suite with fixed seeds");
  std::string suite;
  verify->add_option("suite", suite, "spectral, spaces, nehari, rearrange or theorems")->required();

  auto* rearr = app.add_subcommand("rearrange", "symmetric decreasing rearrangement of an x,u CSV");
  std::filesystem::path input, output;
  double alpha = 0.0;
  rearr->add_option("--input", input, "CSV with x,u columns")->required()->check(CLI::ExistingFile);
  rearr->add_option("--output", output, "CSV with x,u,u_star columns")->required();
  auto* alpha_opt = rearr->add_option("--alpha", alpha, "also report the seminorm gain at this order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (seed != 0 || gs->count("--seed") + sweep->count("--seed") > 0) opt.seed = seed;
  if (no_refine) opt.refine = false;

  if (*gs) return cmd_ground_state(opt, std::cout, std::cerr);
  if (*sweep) {
    std::optional<std::string> p;
    std::optional<std::vector<double>> v;
    if (sweep->count("--param")) p = param;
    if (sweep->count("--values")) {
      v.emplace();
      std::istringstream in(values);
      std::string item;
      while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
          v->push_back(std::stod(item));
        } catch (const std::exception&) {
          std::cerr << "configuration error: sweep value '" << item << "' is not a number\n";
          return kConfigError;
        }
      }
    }
    return cmd_sweep(opt, p, v, std::cout, std::cerr);
  }
  if (*verify) return cmd_verify(suite, std::cout, std::cerr);
  std::optional<double> a;
  if (alpha_opt->count()) a = alpha;
  return cmd_rearrange(input, output, a, std::cout, std::cerr);
}
