// Command-line front end: cnls {scalar|coupled|sweep|check} --config FILE

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cnls/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radial ground states of coupled nonlinear Schrodinger systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string state_path;
  auto* scalar = app.add_subcommand("scalar", "solve the scalar equation for f; writes u0.csv, u0.report");
  auto* coupled = app.add_subcommand("coupled", "solve the coupled system at beta; writes state.csv, state.report");
  auto* sweep = app.add_subcommand("sweep", "solve for each beta in beta_list; writes sweep.csv");
  auto* check = app.add_subcommand("check", "certify a stored r,u,v state against the config");
  for (auto* sub : {scalar, coupled, sweep, check}) {
    sub->add_option("-c,--config", config_path, "configuration file")->required();
  }
  check->add_option("-s,--state", state_path, "state CSV to certify")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cnls::cli::config_error;
  }

  cnls::RunConfig cfg;
  try {
    cfg = cnls::cli::load_config(config_path);
  } catch (const cnls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cnls::cli::exit_code(e.code());
  }

  if (*scalar) return cnls::cli::cmd_scalar(cfg, std::cout, std::cerr);
  if (*coupled) return cnls::cli::cmd_coupled(cfg, std::cout, std::cerr);
  if (*sweep) return cnls::cli::cmd_sweep(cfg, std::cout, std::cerr);
  return cnls::cli::cmd_check(cfg, state_path, std::cout, std::cerr);
}
