// pmflab command line: generate networks, compute bound reports, run the
// scaling experiments, and query cuts. All outputs are pure functions of the
// arguments and input files.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmflab/fading.hpp"
#include "pmflab/flow.hpp"
#include "pmflab/graph.hpp"
#include "pmflab/interference.hpp"
#include "pmflab/io.hpp"
#include "pmflab/random_net.hpp"
#include "pmflab/traffic.hpp"

namespace {

using pmflab::io::json;

pmflab::Limits limits_from_env() {
  pmflab::Limits limits;
  const char* env = std::getenv("PMFLAB_LIMITS");
  if (env == nullptr) return limits;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("PMFLAB_LIMITS entries must look like key=value");
    const std::string key = item.substr(0, eq);
    const int value = std::stoi(item.substr(eq + 1));
    if (key == "enum") limits.enum_cap = value;
    else if (key == "lp_rows") limits.lp_row_cap = value;
    else throw std::runtime_error("PMFLAB_LIMITS: unknown key " + key);
  }
  return limits;
}

pmflab::Region parse_region(const std::string& spec) {
  if (spec == "unit-square" || spec == "unit_square") return pmflab::Region::unit_square();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const double side = std::stod(spec.substr(colon + 1));
    if (kind == "square") return pmflab::Region::square(side);
    if (kind == "torus") return pmflab::Region::torus(side);
  }
  throw CLI::ValidationError("--region", "expected unit-square, square:SIDE or torus:SIDE");
}

pmflab::WeightVector parse_pi(const std::string& spec, int n) {
  if (spec == "uniform") return pmflab::WeightVector::uniform(n);
  std::vector<double> raw;
  if (!spec.empty() && spec.front() == '@') {
    const json j = json::parse(pmflab::io::read_file(spec.substr(1)));
    for (const auto& v : j) raw.push_back(v.get<double>());
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) raw.push_back(std::stod(item));
  }
  if (static_cast<int>(raw.size()) != n)
    throw std::runtime_error("--pi has " + std::to_string(raw.size()) + " entries for " +
                             std::to_string(n) + " nodes");
  pmflab::WeightVector w = pmflab::WeightVector::normalized(std::move(raw));
  if (w.was_rescaled())
    std::cerr << "warning: weights rescaled to sum(pi) = p_pi = " << w.positive_count() << "\n";
  return w;
}

std::vector<int> parse_ns(const std::string& spec) {
  std::vector<int> ns;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) ns.push_back(std::stoi(item));
  if (ns.empty()) throw CLI::ValidationError("--ns", "expected a comma-separated list");
  return ns;
}

struct GenArgs {
  std::string model;
  int n = 0;
  int m = 0;
  std::string region = "unit-square";
  std::uint64_t seed = 0;
  double power = 1.0;
  double alpha = 3.5;
  std::string out;
};

int run_gen(const GenArgs& args) {
  pmflab::Region region = parse_region(args.region);
  pmflab::Network net;
  if (args.model == "geometric") {
    if (args.n < 2) throw CLI::ValidationError("--n", "geometric model needs --n >= 2");
    net = pmflab::sample_geometric(args.n, region, args.seed, args.power,
                                   pmflab::Pathloss::inverse_poly(args.alpha));
  } else if (args.model == "grid") {
    if (args.m < 2) throw CLI::ValidationError("--m", "grid model needs --m >= 2");
    const double side = region.kind == pmflab::Region::Kind::UnitSquare ? 1.0 : region.side;
    net.points = pmflab::grid_points(args.m, side);
    net.region = region;
    net.power = args.power;
    net.pathloss = pmflab::Pathloss::inverse_poly(args.alpha);
  } else {
    throw CLI::ValidationError("--model", "expected geometric or grid");
  }
  pmflab::io::write_file(args.out, pmflab::io::network_to_json(net).dump(2) + "\n");
  return 0;
}

struct BoundArgs {
  std::string mode;
  std::string net_file;
  std::string graph_file;
  std::string pi = "uniform";
  std::string protocol = "standard";
  std::string r_spec = "auto";
  double eta = 0.1;
  bool half_duplex = true;
  double sinr_gamma = 0.0, sinr_beta = 0.0, sinr_w = 1.0, sinr_n0b = 0.1;
  double delta = 1e-3;
  double epsilon = 0.3;
  std::string out;
};

int run_bound(const BoundArgs& args, const pmflab::Limits& limits) {
  pmflab::SolveOptions options{limits, pmflab::SolveOptions::Mode::Auto, args.epsilon};
  pmflab::BoundReport report;
  json extra;

  if (args.mode == "wireline") {
    if (args.graph_file.empty()) throw CLI::ValidationError("--graph", "wireline mode needs --graph");
    pmflab::CapGraph g = pmflab::io::graph_from_json(json::parse(pmflab::io::read_file(args.graph_file)));
    report = pmflab::pmf_bounds_wireline(g, parse_pi(args.pi, g.node_count()), options);
  } else {
    if (args.net_file.empty()) throw CLI::ValidationError("--net", "this mode needs --net");
    pmflab::Network net =
        pmflab::io::network_from_json(json::parse(pmflab::io::read_file(args.net_file)));
    pmflab::WeightVector w = parse_pi(args.pi, net.size());
    const double r_star = pmflab::network_connectivity_radius(net);
    const double r = args.r_spec == "auto" ? r_star : std::stod(args.r_spec);

    if (args.mode == "combinatorial") {
      pmflab::ConflictModel model;
      if (args.protocol == "sinr") {
        const double n0b = net.n0b.value_or(args.sinr_n0b);
        pmflab::SinrModel sinr =
            pmflab::sinr_threshold_model(net, args.sinr_gamma, args.sinr_beta, args.sinr_w, n0b);
        model = std::move(sinr.model);
        extra["valid_rate_W"] = sinr.valid_rate_w;
        extra["beta_threshold"] = sinr.beta_threshold;
      } else {
        model = pmflab::protocol_model(net, r, args.eta, args.protocol == "restricted",
                                       args.half_duplex);
      }
      report = pmflab::umf_bounds_combinatorial(model, w, options);
      if (net.size() <= limits.enum_cap) {
        pmflab::BoundReport psi = pmflab::psi_bounds(model, w, options);
        report.metadata["psi_lower"] = psi.lower;
        report.metadata["psi_upper"] = psi.upper;
      }
    } else if (args.mode == "rx-csi") {
      report = pmflab::pmf_bounds_rx_csi(net, w, r, options);
    } else if (args.mode == "awgn") {
      report = pmflab::pmf_bounds_awgn(net, w, args.delta, options);
    } else if (args.mode == "txrx-csi") {
      pmflab::TxRxUpperBound ub = pmflab::upper_bound_txrx_csi(net, w, limits);
      report = pmflab::BoundReport::make(0.0, ub.value);
      report.upper_witness = std::move(ub.cut);
      report.metadata["mode_txrx"] = 1.0;
    } else {
      throw CLI::ValidationError("--mode",
                                 "expected wireline, combinatorial, rx-csi, txrx-csi or awgn");
    }
  }

  json j = pmflab::io::bound_report_to_json(report);
  for (auto& [key, value] : extra.items()) j[key] = value;
  pmflab::io::write_file(args.out, j.dump(2) + "\n");
  return 0;
}

struct ExperimentArgs {
  std::string ns_spec;
  int trials = 1;
  std::uint64_t seed = 0;
  double c_r = 1.0;
  double eta = 0.1;
  double alpha = 3.5;
  double epsilon = 0.3;
  std::string outdir;
};

int write_experiment(const pmflab::ExperimentResult& result, const ExperimentArgs& args,
                     const std::string& kind) {
  namespace fs = std::filesystem;
  const fs::path dir(args.outdir);
  pmflab::io::write_file(dir / "rows.csv", pmflab::io::experiment_csv(result));
  pmflab::io::write_file(dir / "summary.json",
                         pmflab::io::experiment_summary_json(result).dump(2) + "\n");
  json prov;
  prov["command"] = "experiment " + kind;
  prov["ns"] = args.ns_spec;
  prov["trials"] = args.trials;
  prov["seed"] = args.seed;
  prov["c_r"] = args.c_r;
  if (kind == "scaling-comb") prov["eta"] = args.eta;
  if (kind == "scaling-fading") prov["alpha"] = args.alpha;
  pmflab::io::write_file(dir / "provenance.json", prov.dump(2) + "\n");

  const bool all_failed = !result.rows.empty() &&
                          std::all_of(result.rows.begin(), result.rows.end(),
                                      [](const pmflab::ExperimentRow& row) {
                                        return row.status.rfind("error", 0) == 0;
                                      });
  return all_failed ? 1 : 0;
}

struct DelayArgs {
  std::string paths_file;
  int grid_m = 0;
  double rate = 1.0;
  std::string out;
};

int run_delay(const DelayArgs& args) {
  std::vector<pmflab::FlowPath> paths;
  pmflab::TrafficMatrix lam;
  if (!args.paths_file.empty()) {
    auto [p, l] = pmflab::io::paths_from_json(json::parse(pmflab::io::read_file(args.paths_file)));
    paths = std::move(p);
    lam = std::move(l);
  } else if (args.grid_m >= 2) {
    paths = pmflab::grid_umf_paths(args.grid_m, args.rate);
    lam = pmflab::pmf_matrix(args.rate, pmflab::WeightVector::uniform(args.grid_m * args.grid_m));
  } else {
    throw CLI::ValidationError("--paths", "need --paths FILE or --grid M");
  }
  pmflab::DelayReport report = pmflab::delay_report(paths, lam);
  json j;
  j["S_n"] = report.s_n;
  j["lambda_bar"] = report.lambda_bar;
  j["D_n"] = report.d_n;
  pmflab::io::write_file(args.out, j.dump(2) + "\n");
  return 0;
}

struct CutArgs {
  std::string graph_file;
  std::string pi = "uniform";
  std::string kind = "sparsest";
  std::string out;
};

int run_cut(const CutArgs& args, const pmflab::Limits& limits) {
  pmflab::CapGraph g = pmflab::io::graph_from_json(json::parse(pmflab::io::read_file(args.graph_file)));
  json j;
  if (args.kind == "sparsest") {
    pmflab::CutSearchResult res =
        pmflab::sparsest_cut(g, parse_pi(args.pi, g.node_count()), limits);
    j = pmflab::io::cut_to_json(res.cut);
    j["heuristic"] = res.heuristic;
  } else if (args.kind == "conductance") {
    pmflab::ConductanceResult res = pmflab::conductance(g, limits);
    j["side_u"] = res.side_u;
    j["value"] = res.value;
    j["disconnected"] = res.disconnected;
  } else {
    throw CLI::ValidationError("--kind", "expected sparsest or conductance");
  }
  pmflab::io::write_file(args.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounds on product multicommodity flow in wireless networks"};
  app.require_subcommand(1);
  // pmflab --config file.ini <subcommand>: keys live in [subcommand] sections
  // and explicit command-line flags win
  app.set_config("--config");

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a network file");
  cmd_gen->add_option("--model", gen.model, "geometric | grid")->required();
  cmd_gen->add_option("--n", gen.n, "node count (geometric)");
  cmd_gen->add_option("--m", gen.m, "grid side (grid)");
  cmd_gen->add_option("--region", gen.region, "unit-square | square:SIDE | torus:SIDE");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--P", gen.power, "transmit power");
  cmd_gen->add_option("--alpha", gen.alpha, "pathloss exponent");
  cmd_gen->add_option("-o,--out", gen.out, "output file")->required();

  BoundArgs bound;
  CLI::App* cmd_bound = app.add_subcommand("bound", "compute a bound report");
  cmd_bound->add_option("--mode", bound.mode, "wireline | combinatorial | rx-csi | txrx-csi | awgn")
      ->required();
  cmd_bound->add_option("--net", bound.net_file, "network JSON");
  cmd_bound->add_option("--graph", bound.graph_file, "capacitated graph JSON (wireline)");
  cmd_bound->add_option("--pi", bound.pi, "uniform | w1,w2,... | @file");
  cmd_bound->add_option("--protocol", bound.protocol, "standard | restricted | sinr");
  cmd_bound->add_option("--r", bound.r_spec, "radius or auto (= r*)");
  cmd_bound->add_option("--eta", bound.eta, "protocol interference margin");
  cmd_bound->add_flag("--half-duplex,!--no-half-duplex", bound.half_duplex,
                      "links sharing an endpoint conflict");
  cmd_bound->add_option("--gamma", bound.sinr_gamma, "SINR link gain threshold");
  cmd_bound->add_option("--beta", bound.sinr_beta, "SINR interference gain threshold");
  cmd_bound->add_option("--W", bound.sinr_w, "SINR per-link rate");
  cmd_bound->add_option("--n0b", bound.sinr_n0b, "SINR noise-bandwidth product");
  cmd_bound->add_option("--delta", bound.delta, "AWGN residual interference target");
  cmd_bound->add_option("--epsilon", bound.epsilon, "approximate-mode accuracy");
  cmd_bound->add_option("-o,--out", bound.out, "output file")->required();

  ExperimentArgs exp;
  CLI::App* cmd_exp = app.add_subcommand("experiment", "run a scaling experiment");
  cmd_exp->require_subcommand(1);
  CLI::App* exp_comb = cmd_exp->add_subcommand("scaling-comb", "restricted protocol model scaling");
  CLI::App* exp_fad = cmd_exp->add_subcommand("scaling-fading", "fading half-split scaling");
  for (CLI::App* sub : {exp_comb, exp_fad}) {
    sub->add_option("--ns", exp.ns_spec, "comma-separated node counts (perfect squares)")->required();
    sub->add_option("--trials", exp.trials, "trials per n");
    sub->add_option("--seed", exp.seed, "experiment seed");
    sub->add_option("--c-r", exp.c_r, "radius constant");
    sub->add_option("--epsilon", exp.epsilon, "approximate-mode accuracy");
    sub->add_option("-o,--out", exp.outdir, "output directory")->required();
  }
  exp_comb->add_option("--eta", exp.eta, "protocol interference margin");
  exp_fad->add_option("--alpha", exp.alpha, "pathloss exponent (> 3)");

  DelayArgs delay;
  CLI::App* cmd_delay = app.add_subcommand("delay", "hop-count delay of a flow decomposition");
  cmd_delay->add_option("--paths", delay.paths_file, "paths JSON file");
  cmd_delay->add_option("--grid", delay.grid_m, "route uniform flow on an m x m grid instead");
  cmd_delay->add_option("--rate", delay.rate, "per-pair rate for --grid");
  cmd_delay->add_option("-o,--out", delay.out, "output file")->required();

  CutArgs cut;
  CLI::App* cmd_cut = app.add_subcommand("cut", "sparsest cut / conductance queries");
  cmd_cut->add_option("--graph", cut.graph_file, "capacitated graph JSON")->required();
  cmd_cut->add_option("--pi", cut.pi, "uniform | w1,w2,... | @file");
  cmd_cut->add_option("--kind", cut.kind, "sparsest | conductance");
  cmd_cut->add_option("-o,--out", cut.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    const pmflab::Limits limits = limits_from_env();
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_bound->parsed()) return run_bound(bound, limits);
    if (cmd_exp->parsed()) {
      pmflab::SolveOptions solve{limits, pmflab::SolveOptions::Mode::Auto, exp.epsilon};
      if (exp_comb->parsed()) {
        pmflab::CombExperimentConfig config;
        config.ns = parse_ns(exp.ns_spec);
        config.trials = exp.trials;
        config.seed = exp.seed;
        config.c_r = exp.c_r;
        config.eta = exp.eta;
        config.solve = solve;
        return write_experiment(pmflab::scaling_experiment_combinatorial(config), exp,
                                "scaling-comb");
      }
      pmflab::FadingExperimentConfig config;
      config.ns = parse_ns(exp.ns_spec);
      config.alpha = exp.alpha;
      config.trials = exp.trials;
      config.seed = exp.seed;
      config.c_r = exp.c_r;
      config.solve = solve;
      return write_experiment(pmflab::scaling_experiment_fading(config), exp, "scaling-fading");
    }
    if (cmd_delay->parsed()) return run_delay(delay);
    if (cmd_cut->parsed()) return run_cut(cut, limits);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
