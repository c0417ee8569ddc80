#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "steer/cli.hpp"

using steer::cli::Command;
using steer::cli::OutputFormat;
using steer::cli::RunConfig;
using steer::radii::FamilyKind;

int main(int argc, char** argv) {
  CLI::App app{"Steering critical radii, LHS model checks and steerability bounds"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string family = "werner";
  std::string format = "csv";
  std::string anchor = "werner";
  std::string level = "2";
  std::string denominator = "printed";
  double feasibility_tol = 0.0;
  auto fmt_check = CLI::IsMember({"csv", "json"});
  auto fam_check = CLI::IsMember({"werner", "isotropic"});

  auto* radii = app.add_subcommand("radii", "Radius table for one state family");
  radii->add_option("--family", family, "werner or isotropic")->check(fam_check);
  radii->add_option("--d-min", cfg.d_min, "Smallest dimension")->required();
  radii->add_option("--d-max", cfg.d_max, "Largest dimension")->required();
  radii->add_option("--format", format, "csv or json")->check(fmt_check);
  radii->add_option("--out", cfg.out_file, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--seed", cfg.seed, "Random seed");
  verify->add_option("--samples", cfg.samples, "Monte Carlo samples per statistical check");
  verify->add_option("--out", cfg.out_file, "Output file (default stdout)");

  auto* scan = app.add_subcommand("conjecture-scan", "Per-rank radii and argmin rank over a dimension range");
  auto* scan_family = scan->add_option("--family", family, "werner or isotropic (default both)")->check(fam_check);
  scan->add_option("--d-min", cfg.d_min, "Smallest dimension (default 2)");
  scan->add_option("--d-max", cfg.d_max, "Largest dimension")->required();
  scan->add_option("--format", format, "csv or json")->check(fmt_check);
  scan->add_option("--out", cfg.out_file, "Output file (default stdout)");

  auto* bound = app.add_subcommand("bound", "Lower and upper steerability bounds for a state file");
  bound->add_option("--state", cfg.state_file, "JSON state file")->required()->check(CLI::ExistingFile);
  bound->add_option("--anchor", anchor, "Anchor family: werner or isotropic")->check(fam_check);
  bound->add_option("--n", level, "Measurement level: 2 or pvm")->check(CLI::IsMember({"2", "pvm"}));
  bound->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  bound->add_option("--isotropic-denominator", denominator, "printed (d^2-F_S-1) or twirled (d^2 F_S-1)")
      ->check(CLI::IsMember({"printed", "twirled"}));
  auto* tol_opt = bound->add_option("--feasibility-tol", feasibility_tol, "SDP feasibility gap tolerance");
  bound->add_option("--out", cfg.out_file, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : steer::cli::kInputError;
  }

  if (radii->parsed()) {
    cfg.command = Command::Radii;
  } else if (verify->parsed()) {
    cfg.command = Command::Verify;
  } else if (scan->parsed()) {
    cfg.command = Command::ConjectureScan;
    if (scan_family->count() == 0) cfg.families = {FamilyKind::Werner, FamilyKind::Isotropic};
  } else {
    cfg.command = Command::Bound;
  }
  if (cfg.command != Command::ConjectureScan || scan_family->count() > 0) {
    cfg.families = {steer::radii::parse_family(family)};
  }
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.anchor = steer::radii::parse_family(anchor);
  cfg.level = steer::cli::parse_level(level);
  cfg.isotropic_denominator = denominator == "twirled" ? steer::criteria::IsotropicDenominator::Twirled
                                                       : steer::criteria::IsotropicDenominator::AsPrinted;
  if (tol_opt->count() > 0) cfg.tolerances.feasibility = feasibility_tol;

  return steer::cli::run(cfg, std::cout, std::cerr);
}
