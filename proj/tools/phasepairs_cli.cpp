#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "phasepairs/commands.hpp"
#include "phasepairs/errors.hpp"

using namespace phasepairs;

int main(int argc, char** argv) {
  CLI::App app{"Build and verify function pairs whose spectrograms agree on lattices"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> tol;
  bool png = false;
  std::string repro_name;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file");
    if (needs_config) opt->required();
    sub->add_option("--out", out_dir, "output directory");
  };
  auto* build_cmd = app.add_subcommand("build", "construct a pair and write its description");
  add_common(build_cmd, true);
  auto* verify_cmd = app.add_subcommand("verify", "check spectrogram equality on the sampling set");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--tol", tol, "relative tolerance");
  auto* grid_cmd = app.add_subcommand("grid", "tabulate the difference of spectrograms on a slice");
  add_common(grid_cmd, true);
  grid_cmd->add_flag("--png", png, "also write a contour image (d = 2)");
  auto* repro_cmd = app.add_subcommand("repro", "run a built-in experiment");
  repro_cmd->add_option("name", repro_name, "experiment name")->required()->check(CLI::IsMember(repro_names()));
  repro_cmd->add_option("--out", out_dir, "output directory");
  repro_cmd->add_option("--tol", tol, "relative tolerance");
  repro_cmd->add_flag("--png", png, "also write contour images");
  auto* info_cmd = app.add_subcommand("lattice-info", "describe a lattice generator");
  add_common(info_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  CommandOptions opts;
  opts.out_dir = out_dir;
  opts.tol = tol;
  opts.png = png;

  return guarded(
      [&]() -> int {
        std::filesystem::create_directories(opts.out_dir);
        if (repro_cmd->parsed()) return cmd_repro(repro_name, opts, std::cout);
        if (info_cmd->parsed()) {
          std::ifstream in(config_path);
          if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
          return cmd_lattice_info(json::parse(in), opts, std::cout);
        }
        const RunConfig cfg = load_config(config_path);
        if (build_cmd->parsed()) return cmd_build(cfg, opts, std::cout);
        if (verify_cmd->parsed()) return cmd_verify(cfg, opts, std::cout);
        return cmd_grid(cfg, opts, std::cout);
      },
      std::cerr);
}
