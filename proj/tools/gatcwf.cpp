#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gatcwf/driver.hpp"
#include "gatcwf/presentation.hpp"

using namespace gatcwf;

namespace {

struct Common {
  std::string mode = "tower";
  bool cumulative = false;
  std::uint32_t max_universe = 0;
  std::size_t fuel = driver::default_fuel();
  bool trace = false;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--mode", c.mode, "Theory: tower or up")->check(CLI::IsMember({"tower", "up"}));
  cmd->add_flag("--cumulative", c.cumulative, "Enable lift and single-index Pi codes");
  cmd->add_option("--max-universe", c.max_universe, "Tower truncation: number of universes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fuel", c.fuel, "Rewrite steps per query (env GATCWF_FUEL)");
  cmd->add_flag("--trace", c.trace, "Print rewrite traces");
  cmd->add_option("--format", c.format, "Report format: text or json")->check(CLI::IsMember({"text", "json"}));
}

driver::Config to_config(const Common& c) {
  driver::Config cfg;
  cfg.flags.mode = c.mode == "up" ? Mode::Up : Mode::Tower;
  cfg.flags.cumulative = c.cumulative;
  if (c.max_universe > 0) cfg.flags.max_universe = c.max_universe;
  cfg.flags.fuel = c.fuel;
  cfg.flags.trace = c.trace;
  cfg.format = c.format == "json" ? driver::Format::Json : driver::Format::Text;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker for the gats of cwfs with universe towers and universe levels"};
  app.require_subcommand(1);

  Common check_opts;
  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "Check .gat files");
  add_common(check, check_opts);
  check->add_option("files", files, "Input files")->required();

  Common explain_opts;
  std::string explain_file;
  std::string explain_name;
  auto* explain = app.add_subcommand("explain", "Print rewrite traces of a check-eq");
  add_common(explain, explain_opts);
  explain->add_option("file", explain_file)->required();
  explain->add_option("name", explain_name)->required();

  std::uint32_t tower_n = 1;
  bool tower_cumulative = false;
  std::string tower_out;
  auto* gen = app.add_subcommand("gen-tower", "Print the presentation of the n-universe truncation");
  gen->add_option("n", tower_n)->required()->check(CLI::PositiveNumber);
  gen->add_flag("--cumulative", tower_cumulative);
  gen->add_option("-o,--output", tower_out, "Write to a file instead of stdout");

  std::vector<std::string> pres_files;
  std::size_t pres_fuel = driver::default_fuel();
  bool pres_cross = false;
  std::string pres_format = "text";
  auto* pres = app.add_subcommand("check-presentation", "Check presentation files");
  pres->add_option("files", pres_files)->required();
  pres->add_option("--fuel", pres_fuel);
  pres->add_flag("--cross-check", pres_cross, "Compare against the kernel's rule tables");
  pres->add_option("--format", pres_format)->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  if (*check) return driver::run(to_config(check_opts), files, std::cout, std::cerr);
  if (*explain) return driver::explain(to_config(explain_opts), explain_file, explain_name, std::cout, std::cerr);
  if (*gen) {
    std::string text = presentation::print(presentation::truncate_tower(tower_n, tower_cumulative));
    if (tower_out.empty()) {
      std::cout << text;
      return 0;
    }
    std::ofstream out(tower_out, std::ios::binary);
    if (!out) {
      std::cerr << tower_out << ": cannot write file\n";
      return driver::kIoError;
    }
    out << text;
    return 0;
  }
  if (*pres) {
    return presentation::run(pres_files, pres_fuel, pres_cross, pres_format == "json", std::cout, std::cerr);
  }
  return 0;
}
