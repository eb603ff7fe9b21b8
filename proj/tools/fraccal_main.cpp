// fraccal — batch experiment runner for the fractional Schrodinger
// laboratory.  `fraccal run config.json` executes the configured
// experiment and writes CSV/JSON artifacts plus a hashed manifest;
// `fraccal validate config.json` checks the schema without computing.

#include <CLI11.hpp>

#include <iostream>

#include "fraccal/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fraccal: desk-scale laboratory for the quasilocally perturbed "
               "fractional Schrodinger equation"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_path, "JSON config file")->required();
  CLI::App* validate = app.add_subcommand("validate", "schema-check a config, no computation");
  validate->add_option("config", validate_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return fraccal::run_config_file(run_path);

  const fraccal::ValidationReport rep = fraccal::validate_config_file(validate_path);
  std::cout << rep.to_json().dump(2) << "\n";
  return rep.ok() ? 0 : 2;
}
