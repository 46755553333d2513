// charflow solve|verify|compare|hodograph --config <path> [--out dir] [--threads N]

#include <CLI11.hpp>

#include <iostream>

#include "charflow/commands.hpp"
#include "charflow/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Smooth solutions of 1D isentropic gas dynamics by characteristics"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  for (const char* name : {"solve", "verify", "compare", "hodograph"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads (overrides threads)")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : charflow::kExitValidation;
  }
  charflow::RunConfig cfg;
  try {
    cfg = charflow::load_config(config_path);
  } catch (const charflow::Error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return charflow::kExitValidation;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (threads > 0) cfg.threads = threads;
  return charflow::run_command(app.get_subcommands().front()->get_name(), cfg, std::cout, std::cerr);
}
