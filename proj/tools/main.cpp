// hypercount: counting experiments on a closed hyperbolic surface.
//
// Exit codes: 0 success, 2 invalid configuration, 3 budget truncation
// (partial report written), 1 other failures.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypercount/lab.hpp"

namespace lab = hypercount::lab;

int main(int argc, char** argv) {
  CLI::App app{"Counting experiments for geodesics and graph realizations on hyperbolic surfaces"};
  // "--h" is a length option here, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  lab::ExperimentConfig c;
  bool no_timing = false;
  std::string config_path;
  std::size_t max_elements = c.budget.max_elements;
  double max_seconds = c.budget.max_seconds;

  app.add_option("--threads", c.threads, "Worker threads for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--output", c.output, "Report path (default stdout)");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "Seed for randomized experiments");
  app.add_flag("--no-timing", no_timing, "Write runtime_ms as 0 (byte-identical reruns)");
  app.add_option("--max-elements", max_elements, "Cap on enumerated elements");
  app.add_option("--max-seconds", max_seconds, "Wall-clock cap for enumerations");

  auto* census = app.add_subcommand("census", "One-boundary trivalent fat graph census");
  census->add_option("--genus", c.genus)->required();

  auto* huber = app.add_subcommand("huber", "Closed geodesics of length at most L");
  huber->add_option("--genus", c.genus)->required();
  huber->add_option("--L", c.L)->required();

  auto* delsarte = app.add_subcommand("delsarte", "Orbit points of the base point within distance L");
  delsarte->add_option("--genus", c.genus)->required();
  delsarte->add_option("--L", c.L)->required();

  auto* sectors = app.add_subcommand("sectors", "Arcs with length in (L, L+h] leaving and arriving in sectors");
  sectors->add_option("--genus", c.genus)->required();
  sectors->add_option("--L", c.L)->required();
  sectors->add_option("--h", c.h)->required();
  sectors->add_option("--sector-i", c.sector_i, "Width of the outgoing sector (radians)");
  sectors->add_option("--sector-j", c.sector_j, "Width of the incoming sector (radians)");

  auto* critical = app.add_subcommand("critical-count", "Critical realizations of a graph with length at most L");
  critical->add_option("--graph", c.graph, "theta, dumbbell or a graph file")->required();
  critical->add_option("--L", c.L)->required();
  critical->add_option("--genus", c.genus);

  std::string lvec;
  auto* box = app.add_subcommand("box-count", "Critical realizations with edge lengths in a box");
  box->add_option("--graph", c.graph)->required();
  box->add_option("--lvec", lvec, "Comma separated lower corners, one per edge")->required();
  box->add_option("--h", c.h)->required();
  box->add_option("--genus", c.genus);

  auto* audit = app.add_subcommand("lambda-audit", "Boundary length against 2 length - 2 kappa");
  audit->add_option("--genus-fat", c.genus_fat)->required();
  audit->add_option("--samples", c.samples)->required();
  audit->add_option("--min-edge", c.min_edge)->required();
  audit->add_option("--seed", c.seed);
  audit->add_option("--genus", c.genus);

  auto* fat = app.add_subcommand("fat-fraction", "Fraction of theta components compatible with a fat structure");
  fat->add_option("--samples", c.samples)->required();
  fat->add_option("--seed", c.seed);
  fat->add_option("--genus", c.genus);

  auto* hexagon = app.add_subcommand("hexagon", "Diameter and area of the thin hexagon T(eps)");
  hexagon->add_option("--epsilon", c.epsilon)->required();

  auto* defect = app.add_subcommand("angle-defect", "Loop angle defect against its closed form");
  defect->add_option("--samples", c.samples)->required();
  defect->add_option("--seed", c.seed);

  auto* oracle = app.add_subcommand("oracle-check", "Pruned against brute-force critical enumeration");
  oracle->add_option("--L", c.L)->required();
  oracle->add_option("--graph", c.graph);
  oracle->add_option("--genus", c.genus);

  auto* run = app.add_subcommand("run", "Run an experiment described by a YAML config");
  run->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      // Global flags given on the command line override the file.
      const auto file = lab::load_config(config_path);
      const auto cli = c;
      c = file;
      if (app.count("--threads")) c.threads = cli.threads;
      if (app.count("--output")) c.output = cli.output;
      if (app.count("--format")) c.format = cli.format;
      if (app.count("--seed")) c.seed = cli.seed;
    } else {
      const auto* sub = app.get_subcommands().front();
      c.kind = *lab::parse_kind(sub->get_name());
      if (box->parsed()) {
        c.lvec.clear();
        std::stringstream ss(lvec);
        for (std::string item; std::getline(ss, item, ',');) {
          try {
            c.lvec.push_back(std::stod(item));
          } catch (const std::exception&) {
            throw lab::InvalidConfig("lvec entry '" + item + "' is not a number");
          }
        }
      }
    }
    if (no_timing) c.timing = false;
    if (app.count("--max-elements")) c.budget.max_elements = max_elements;
    if (app.count("--max-seconds")) c.budget.max_seconds = max_seconds;
    lab::validate(c);

    const auto result = lab::run_experiment(c);
    lab::emit_report(result.rows, c.format, c.output);
    if (result.truncated) {
      std::cerr << "hypercount: budget exceeded, report truncated\n";
      return 3;
    }
    return 0;
  } catch (const lab::InvalidConfig& e) {
    std::cerr << "hypercount: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hypercount: " << e.what() << "\n";
    return 1;
  }
}
