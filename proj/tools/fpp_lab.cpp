// fpp-lab: experiment runner and environment inspector.
//
// Exit codes: 0 success / verdict consistent, 2 verdict violated,
// 3 verdict inconclusive, 1 usage or config error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/experiments.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/percolation.hpp"

namespace {

fpp::Point parse_point(const std::string& text) {
  std::vector<fpp::Coord> coords;
  std::string tok;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ') {
      if (!tok.empty()) {
        coords.push_back(std::stoll(tok));
        tok.clear();
      }
    } else if (ch == '(' || ch == ')') {
      continue;
    } else {
      tok += ch;
    }
  }
  if (coords.empty()) throw std::invalid_argument("empty point literal: " + text);
  return fpp::Point(std::move(coords));
}

nlohmann::ordered_json geodesic_json(const fpp::GeodesicResult& g) {
  nlohmann::ordered_json j;
  j["T"] = g.T;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const fpp::Point& p : g.geodesic.vertices) j["vertices"].push_back(p.c);
  j["boundary_touched"] = g.boundary_touched;
  return j;
}

int run_cmd(const std::string& experiment, const std::string& config_path,
            std::uint64_t seed, bool seed_given, std::size_t replicas,
            std::string out_dir, int workers) {
  fpp::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = fpp::ExperimentConfig::load(config_path);
    if (cfg.name.empty()) cfg.name = experiment;
    if (cfg.name != experiment)
      throw std::invalid_argument("config names experiment '" + cfg.name +
                                  "' but the command requested '" + experiment + "'");
  } else {
    cfg = fpp::default_config(experiment);
  }
  if (seed_given) cfg.master_seed = seed;
  if (replicas != 0) cfg.replicas = replicas;
  if (workers != 0) cfg.workers = workers;

  fpp::ExperimentReport rep = fpp::run_experiment(cfg);

  if (out_dir.empty()) {
    const char* env = std::getenv("FPP_LAB_OUT");
    out_dir = env && *env ? env : "fpp-lab-out";
  }
  std::string manifest = fpp::write_report(rep, out_dir);

  std::printf("experiment: %s\n", rep.name.c_str());
  std::printf("inequality: %s\n", rep.inequality.c_str());
  std::printf("%-12s %12s %12s %12s %12s\n", "cell", "param", "estimate",
              "stderr", "reference");
  for (const fpp::Cell& c : rep.cells)
    std::printf("%-12s %12g %12g %12g %12g\n", c.label.c_str(), c.param,
                c.estimate, c.stderr_, c.reference);
  std::printf("fitted constant: %g\n", rep.fitted_constant);
  if (!rep.note.empty()) std::printf("note: %s\n", rep.note.c_str());
  std::printf("runtime: %.2fs\n", rep.runtime_seconds);
  std::printf("artifacts: %s\n", out_dir.c_str());
  std::printf("manifest: %s\n", manifest.c_str());
  std::printf("verdict: %s\n", fpp::to_string(rep.verdict).c_str());
  switch (rep.verdict) {
    case fpp::Verdict::Consistent: return 0;
    case fpp::Verdict::Violated: return 2;
    case fpp::Verdict::Inconclusive: return 3;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage percolation laboratory"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a named experiment");
  std::string experiment, config_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  int workers = 0;
  run->add_option("experiment", experiment, "experiment name")->required();
  run->add_option("--config", config_path, "config file (flat key = value)");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  run->add_option("--replicas", replicas, "replica count override");
  run->add_option("--out", out_dir, "output directory (default $FPP_LAB_OUT)");
  run->add_option("--workers", workers, "worker threads (never affects results)");

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "print one selected geodesic as JSON");
  std::string from_s = "0,0", to_s, dist_s = "exponential(1)";
  std::uint64_t gseed = 1;
  geo->add_option("--from", from_s, "source point, e.g. 0,0");
  geo->add_option("--to", to_s, "target point, e.g. 10,10")->required();
  geo->add_option("--dist", dist_s, "weight marginal, e.g. exponential(1)");
  geo->add_option("--seed", gseed, "environment seed");

  // inspect-box
  auto* box = app.add_subcommand("inspect-box", "print box geometry as JSON");
  std::string l_s = "0,0";
  int m = 32, j = 1, m1 = 4, rho = 2;
  box->add_option("--l", l_s, "cube index, e.g. 0,0");
  box->add_option("--m", m, "cube side");
  box->add_option("--j", j, "signed axis in {+-1..+-d}");
  box->add_option("--m1", m1, "scaffold pitch");
  box->add_option("--rho", rho, "shrink/inflate factor");

  // list-experiments
  app.add_subcommand("list-experiments", "print the named experiments");

  // validate-config
  auto* val = app.add_subcommand("validate-config", "check a config file");
  std::string val_path;
  val->add_option("file", val_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return run_cmd(experiment, config_path, seed, seed_opt->count() > 0,
                     replicas, out_dir, workers);
    if (geo->parsed()) {
      fpp::Environment env(gseed, fpp::DistributionSpec::parse(dist_s),
                           parse_point(to_s).dim());
      auto res = fpp::shortest_passage(env, parse_point(from_s), parse_point(to_s));
      std::cout << geodesic_json(res).dump(2) << "\n";
      return 0;
    }
    if (box->parsed()) {
      fpp::BoxParams params;
      params.l = parse_point(l_s);
      params.m = m;
      params.j = j;
      params.m1 = m1;
      fpp::BoxGeometry g = fpp::box_geometry(params, rho);
      auto jb = [](const fpp::LatticeBox& b) {
        nlohmann::ordered_json o;
        o["lo"] = b.lo.c;
        o["hi"] = b.hi.c;
        return o;
      };
      nlohmann::ordered_json o;
      o["l"] = params.l.c;
      o["m"] = m;
      o["j"] = j;
      o["m1"] = m1;
      o["S"] = jb(g.S);
      o["R"] = jb(g.R);
      o["Bj"] = jb(g.Bj);
      o["Bcheck_plus"] = jb(g.Bcheck_plus);
      o["Bcheck_minus"] = jb(g.Bcheck_minus);
      o["degenerate"] = g.degenerate;
      o["D_count"] = g.D.size();
      o["C_count"] = g.C.size();
      o["Ctilde_count"] = g.Ctilde.size();
      o["Etilde1_count"] = g.Etilde1.size();
      o["Etilde2_count"] = g.Etilde2.size();
      std::cout << o.dump(2) << "\n";
      return 0;
    }
    if (app.get_subcommand("list-experiments")->parsed()) {
      for (const std::string& n : fpp::experiment_names()) std::cout << n << "\n";
      return 0;
    }
    if (val->parsed()) {
      fpp::ExperimentConfig cfg = fpp::ExperimentConfig::load(val_path);
      fpp::validate_config(cfg);
      std::cout << "ok: " << val_path << " (config_hash "
                << std::hex << cfg.hash() << std::dec << ")\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
