#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmac/kkt.hpp"
#include "bmac/parse.hpp"
#include "bmac/serialize.hpp"
#include "bmac/solver.hpp"
#include "bmac/verify.hpp"

// Command-line front end. Subcommands: solve, region, kkt, g1, verify.
// Exit codes: 0 success, 1 usage/parse error, 2 degenerate channel or
// domain error.

namespace bmac {
namespace cli {

struct RunConfig {
  std::string channel;
  std::string weights = "1,1";
  double eps = 1e-9;
  int grid = 4096;
  int sweep = 201;
  std::string unit = "nats";
  std::string format;
  std::string output;
  std::string fixtures;
};

namespace detail {

inline void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw parse_error("cannot open output file: " + cfg.output);
  f << text;
}

inline Unit parse_unit(const std::string& u) { return u == "bits" ? Unit::Bits : Unit::Nats; }

inline std::string pick_format(const RunConfig& cfg, const char* dflt) {
  return cfg.format.empty() ? dflt : cfg.format;
}

inline std::vector<verify::FixtureCase> load_fixtures(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw parse_error("cannot open fixture file: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("invalid fixture file: " + std::string(e.what()));
  }
  std::vector<verify::FixtureCase> cases;
  for (const auto& item : j.at("cases")) {
    verify::FixtureCase c;
    c.channel = parse_channel(item.at("channel").get<std::string>());
    c.weights = parse_weights(item.at("weights").get<std::string>());
    cases.push_back(c);
  }
  return cases;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Channel ch = parse_channel(cfg.channel);
  const Weights w = parse_weights(cfg.weights);
  const Solution s = solve_auto(ch, w, cfg.grid, cfg.eps);
  const Unit u = parse_unit(cfg.unit);
  const std::string fmt = pick_format(cfg, "json");
  write_output(cfg, fmt == "csv" ? solution_to_csv(s, u) : solution_to_json(s, u), out);
  return 0;
}

inline int cmd_region(const RunConfig& cfg, std::ostream& out) {
  const Channel ch = parse_channel(cfg.channel);
  const RegionBoundary rb = region_boundary(ch, cfg.sweep, cfg.eps, cfg.grid);
  const Unit u = parse_unit(cfg.unit);
  const std::string fmt = pick_format(cfg, "csv");
  write_output(cfg, fmt == "json" ? region_to_json(rb, u) : region_to_csv(rb, u), out);
  return 0;
}

inline int cmd_kkt(const RunConfig& cfg, std::ostream& out) {
  const Channel ch = parse_channel(cfg.channel);
  const Weights w = parse_weights(cfg.weights);
  const auto pts = find_kkt_points(ch, w);
  const Unit u = parse_unit(cfg.unit);
  const std::string fmt = pick_format(cfg, "json");
  write_output(cfg, fmt == "csv" ? kkt_points_to_csv(pts, u) : kkt_points_to_json(pts, u), out);
  return 0;
}

inline int cmd_g1(const RunConfig& cfg, std::ostream& out) {
  const Channel ch = parse_channel(cfg.channel);
  const auto outline = trace_g1(ch, cfg.grid);
  const Unit u = parse_unit(cfg.unit);
  const std::string fmt = pick_format(cfg, "csv");
  write_output(cfg, fmt == "json" ? g1_to_json(outline, u) : g1_to_csv(outline, u), out);
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::optional<std::vector<verify::FixtureCase>> fixtures;
  if (!cfg.fixtures.empty()) fixtures = load_fixtures(cfg.fixtures);
  std::string text;
  {
    std::ostringstream oss;
    const auto results = verify::run_all(fixtures ? &*fixtures : nullptr);
    const bool ok = verify::report(results, oss);
    text = oss.str();
    write_output(cfg, text, out);
    return ok ? 0 : 2;
  }
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weighted sum-rate optimization for the two-user binary multiple-access channel"};
  app.require_subcommand(1);

  RunConfig cfg;
  const auto add_common = [&](CLI::App* sub, bool needs_channel) {
    if (needs_channel)
      sub->add_option("--channel", cfg.channel,
                      "transition probabilities a,b,c,d (decimal or n/m)")
          ->required();
    sub->add_option("--weights", cfg.weights, "weight vector w1,w2 (default 1,1)");
    sub->add_option("--eps", cfg.eps, "p2 tolerance for the bisection/scan (default 1e-9)")
        ->check(CLI::Range(1e-15, 0.499999));
    sub->add_option("--grid", cfg.grid, "grid resolution (default 4096)")
        ->check(CLI::Range(2, 100000000));
    sub->add_option("--sweep", cfg.sweep, "number of weight vectors for region (default 201)")
        ->check(CLI::Range(3, 100000000));
    sub->add_option("--unit", cfg.unit, "output unit (default nats)")
        ->check(CLI::IsMember({"nats", "bits"}));
    sub->add_option("--format", cfg.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", cfg.output, "output path (default stdout)");
  };

  auto* solve = app.add_subcommand("solve", "maximize the weighted sum-rate");
  add_common(solve, true);
  auto* region = app.add_subcommand("region", "sweep the capacity-region boundary");
  add_common(region, true);
  auto* kkt = app.add_subcommand("kkt", "enumerate and classify KKT points");
  add_common(kkt, true);
  auto* g1 = app.add_subcommand("g1", "trace the boundary of the C1 rate image");
  add_common(g1, true);
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  add_common(verify_cmd, false);
  verify_cmd->add_option("--fixtures", cfg.fixtures, "JSON file with extra solve cases");

  std::vector<const char*> argv;
  argv.push_back("bmac");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (solve->parsed()) return detail::cmd_solve(cfg, out);
    if (region->parsed()) return detail::cmd_region(cfg, out);
    if (kkt->parsed()) return detail::cmd_kkt(cfg, out);
    if (g1->parsed()) return detail::cmd_g1(cfg, out);
    if (verify_cmd->parsed()) return detail::cmd_verify(cfg, out);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const degenerate_channel_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

} // namespace cli
} // namespace bmac
