#include <paircorr/cli.hpp>

#include <CLI11.hpp>

#include <map>

using namespace paircorr;

namespace {

void add_source(CLI::App* cmd, cli::RunConfig& cfg) {
  auto* file = cmd->add_option("--zeros", cfg.zeros_path, "zero ordinates, one per line");
  auto* comp = cmd->add_option("--compute", cfg.compute_n, "compute the first N zeros");
  file->excludes(comp);
  cmd->add_option("--cache", cfg.cache_path, "cache file for computed zeros");
}

void add_output(CLI::App* cmd, cli::RunConfig& cfg) {
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  const std::map<std::string, cli::Format> formats{{"csv", cli::Format::csv}, {"json", cli::Format::json}};
  cmd->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pair correlation of zeta zeros: empirical sums, predictions and checks"};
  app.set_help_flag("--help", "print help");  // -h would clash with --h
  app.require_subcommand(1);
  cli::RunConfig cfg;

  auto* zeros = app.add_subcommand("zeros", "load or compute zeros and validate their count");
  add_source(zeros, cfg);
  zeros->add_option("--out", cfg.out, "write the validated table here");

  auto* fh = app.add_subcommand("fh", "empirical F_h next to the theorem prediction for x's range");
  add_source(fh, cfg);
  add_output(fh, cfg);
  auto* xo = fh->add_option("--x", cfg.x, "x value");
  auto* ao = fh->add_option("--alpha", cfg.alpha, "x = T^alpha");
  xo->excludes(ao);
  fh->add_option("--T", cfg.T, "height, or 'max' for the table coverage");
  fh->add_option("--h", cfg.h_list, "comma-separated shifts")->delimiter(',')->required();
  fh->add_option("--window", cfg.window, "keep only pairs with |difference - h| <= W");
  fh->add_option("--theorem", cfg.theorem, "auto, T1, T2, T3 or T4");
  fh->add_option("--k-cap", cfg.k_cap, "singular-series cutoff for T2");
  fh->add_option("--y-cap", cfg.y_cap, "integration cutoff for T2 (0: default)");

  auto* spacing = app.add_subcommand("spacing", "binned pair counts against the conjectured densities");
  add_source(spacing, cfg);
  add_output(spacing, cfg);
  spacing->add_option("--T", cfg.T, "height, or 'max'");
  spacing->add_option("--h", cfg.h_list, "comma-separated shifts")->delimiter(',')->required();
  spacing->add_option("--bin-width", cfg.bin_width, "bin width in mean-spacing units");
  spacing->add_option("--bins", cfg.bins, "number of bins");

  auto* verify = app.add_subcommand("verify", "run the identity checks");
  add_source(verify, cfg);
  add_output(verify, cfg);
  verify->add_option("--check", cfg.checks, "check id (repeatable; default all)");
  verify->add_option("--tolerance", cfg.tol_scale, "multiplier on every tolerance");
  verify->add_option("--seed", cfg.seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);
  if (zeros->parsed()) {
    cfg.command = cli::Command::zeros;
  } else if (fh->parsed()) {
    cfg.command = cli::Command::fh;
  } else if (spacing->parsed()) {
    cfg.command = cli::Command::spacing;
  } else {
    cfg.command = cli::Command::verify;
  }
  return cli::run(cfg);
}
