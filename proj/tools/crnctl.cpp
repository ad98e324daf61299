#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crnctl/io/commands.hpp"
#include "crnctl/io/scenario.hpp"

namespace {

struct Args {
  std::string scenario;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("scenario", args.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides, "Override a scenario value, e.g. controller.alpha=0.45")
      ->type_name("PATH=VALUE");
  cmd->add_option("-o,--out-dir", args.out_dir, "Directory for output artifacts");
  cmd->add_option("-j,--threads", args.threads, "Worker threads for sweeps and SSA ensembles (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crnctl: integral control of biochemical reaction networks"};
  app.require_subcommand(1);
  Args args;
  for (const char* name : {"analyze", "simulate", "compile-dsd", "sweep"}) {
    add_common(app.add_subcommand(name, std::string("Run the ") + name + " command on a scenario"), args);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto command = crnctl::io::parse_command(app.get_subcommands().front()->get_name());
    const auto scenario = crnctl::io::load_scenario(args.scenario, args.overrides);
    crnctl::io::RunOptions options;
    options.out_dir = args.out_dir;
    options.threads = args.threads;
    for (const auto& path : crnctl::io::run_scenario(command, scenario, options)) std::cout << path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "crnctl: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
