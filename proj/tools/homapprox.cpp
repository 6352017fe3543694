#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "homapprox/error.hpp"
#include "homapprox/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous approximation of single-input control-affine systems"};
  homapprox::JobConfig cfg;
  std::string input;
  std::string mode = "both";
  std::string format = "text";
  std::string out_dir;
  int max_order = 0;

  app.add_option("--input", input, "System description file")->required();
  app.add_option("--max-order", max_order, "Fixed maximal order N (default: deepen until accessible)")
      ->check(CLI::Range(1, 13));
  app.add_option("--mode", mode, "both, nonautonomous or autonomous")
      ->check(CLI::IsMember({"both", "nonautonomous", "autonomous"}));
  app.add_option("--format", format, "text, latex or json")->check(CLI::IsMember({"text", "latex", "json"}));
  app.add_flag("--verify", cfg.verify, "Run numerical and symbolic verification");
  app.add_option("--out", out_dir, "Write report.<ext> into this directory instead of stdout");
  app.add_flag("-v,--verbose", cfg.verbosity, "Print progress to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return homapprox::exit_code::kInputError;
  }

  cfg.input = input;
  if (max_order > 0) cfg.max_order = max_order;
  cfg.mode = homapprox::parse_mode(mode);
  cfg.format = homapprox::parse_format(format);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  return homapprox::run(cfg, std::cout, std::cerr);
}
