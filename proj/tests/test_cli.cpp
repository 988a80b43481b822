#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "pmflab/io.hpp"
#include "pmflab/random_net.hpp"

#ifndef PMFLAB_CLI_PATH
#error "PMFLAB_CLI_PATH must point at the pmflab binary"
#endif

namespace fs = std::filesystem;
using pmflab::io::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd =
      std::string(PMFLAB_CLI_PATH) + " " + args + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  if (fs::exists(err)) res.stderr_text = pmflab::io::read_file(err);
  return res;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("pmflab_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen is deterministic and validates flags") {
  TempDir tmp;
  const fs::path a = tmp.path / "a.json", b = tmp.path / "b.json";
  CHECK(run_cli("gen --model geometric --n 16 --region unit-square --seed 7 -o " + a.string(),
                tmp.path).exit_code == 0);
  CHECK(run_cli("gen --model geometric --n 16 --region unit-square --seed 7 -o " + b.string(),
                tmp.path).exit_code == 0);
  CHECK(pmflab::io::read_file(a) == pmflab::io::read_file(b));
  const json net = json::parse(pmflab::io::read_file(a));
  CHECK(net["points"].size() == 16);

  CHECK(run_cli("gen --model grid --m 4 -o " + (tmp.path / "g.json").string(), tmp.path)
            .exit_code == 0);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "g.json"))["points"].size() == 16);

  // usage errors exit 2
  CHECK(run_cli("gen --model geometric -o " + (tmp.path / "x.json").string(), tmp.path)
            .exit_code == 2);
  CHECK(run_cli("gen --n 16 -o " + (tmp.path / "x.json").string(), tmp.path).exit_code == 2);
  CHECK(run_cli("nonsense", tmp.path).exit_code == 2);
}

TEST_CASE("weight flags accept inline lists and files") {
  TempDir tmp;
  pmflab::CapGraph path(4, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0},
                            {2, 3, 1.0}, {3, 2, 1.0}});
  pmflab::io::write_file(tmp.path / "path.json", pmflab::io::graph_to_json(path).dump());

  // endpoint-only weights: the single-commodity min cut between 0 and 3
  RunResult inline_run =
      run_cli("cut --graph " + (tmp.path / "path.json").string() + " --pi 1,0,0,1 -o " +
              (tmp.path / "ends.json").string(), tmp.path);
  CHECK(inline_run.exit_code == 0);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "ends.json"))["sparsity"].get<double>() ==
        doctest::Approx(1.0));

  // same weights from a JSON file, denormalized: rescale warning on stderr
  pmflab::io::write_file(tmp.path / "pi.json", "[2.0, 0.0, 0.0, 2.0]\n");
  RunResult file_run =
      run_cli("cut --graph " + (tmp.path / "path.json").string() + " --pi @" +
              (tmp.path / "pi.json").string() + " -o " + (tmp.path / "ends2.json").string(),
              tmp.path);
  CHECK(file_run.exit_code == 0);
  CHECK(file_run.stderr_text.find("rescaled") != std::string::npos);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "ends2.json"))["sparsity"].get<double>() ==
        doctest::Approx(1.0));

  // wrong length is a usage-shaped failure surfaced as a runtime error
  CHECK(run_cli("cut --graph " + (tmp.path / "path.json").string() + " --pi 1,2 -o " +
                (tmp.path / "bad.json").string(), tmp.path).exit_code == 1);
}

TEST_CASE("cut and wireline bound agree on the 4-path") {
  TempDir tmp;
  pmflab::CapGraph path(4, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0},
                            {2, 3, 1.0}, {3, 2, 1.0}});
  pmflab::io::write_file(tmp.path / "path.json", pmflab::io::graph_to_json(path).dump());

  CHECK(run_cli("cut --graph " + (tmp.path / "path.json").string() + " --kind sparsest -o " +
                (tmp.path / "cut.json").string(), tmp.path).exit_code == 0);
  const json cut = json::parse(pmflab::io::read_file(tmp.path / "cut.json"));
  CHECK(cut["sparsity"].get<double>() == doctest::Approx(0.25));
  CHECK(cut["side_s"] == json::array({0, 1}));
  CHECK_FALSE(cut["heuristic"].get<bool>());

  CHECK(run_cli("cut --graph " + (tmp.path / "path.json").string() + " --kind conductance -o " +
                (tmp.path / "cond.json").string(), tmp.path).exit_code == 0);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "cond.json"))["value"].get<double>() ==
        doctest::Approx(1.0 / 2.0));

  CHECK(run_cli("bound --mode wireline --graph " + (tmp.path / "path.json").string() + " -o " +
                (tmp.path / "rep.json").string(), tmp.path).exit_code == 0);
  const json rep = json::parse(pmflab::io::read_file(tmp.path / "rep.json"));
  CHECK(rep["lower"].get<double>() == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(rep["upper"].get<double>() == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("combinatorial bound pipeline via files") {
  TempDir tmp;
  const fs::path net = tmp.path / "net.json";
  REQUIRE(run_cli("gen --model geometric --n 8 --seed 3 -o " + net.string(), tmp.path)
              .exit_code == 0);
  CHECK(run_cli("bound --mode combinatorial --net " + net.string() +
                " --protocol restricted --r 0.6 --eta 0.1 --pi uniform -o " +
                (tmp.path / "rep.json").string(), tmp.path).exit_code == 0);
  const json rep = json::parse(pmflab::io::read_file(tmp.path / "rep.json"));
  const double kappa = rep["metadata"]["kappa_hat"].get<double>();
  CHECK(rep["upper"].get<double>() ==
        doctest::Approx(kappa * rep["lower"].get<double>()).epsilon(1e-8));
  CHECK(rep["metadata"].contains("psi_lower"));
}

TEST_CASE("rx-csi auto radius and awgn precondition surface") {
  TempDir tmp;
  const fs::path net = tmp.path / "net.json";
  REQUIRE(run_cli("gen --model geometric --n 6 --seed 5 --P 1.0 --alpha 3.0 -o " + net.string(),
                  tmp.path).exit_code == 0);
  CHECK(run_cli("bound --mode rx-csi --net " + net.string() + " --r auto -o " +
                (tmp.path / "rx.json").string(), tmp.path).exit_code == 0);
  const json rx = json::parse(pmflab::io::read_file(tmp.path / "rx.json"));
  CHECK(rx["lower"].get<double>() <= rx["upper"].get<double>() + 1e-9);

  CHECK(run_cli("bound --mode txrx-csi --net " + net.string() + " -o " +
                (tmp.path / "tx.json").string(), tmp.path).exit_code == 0);

  // a hot network violates the low-SNR precondition and names a pair
  REQUIRE(run_cli("gen --model geometric --n 6 --seed 5 --P 50 --alpha 3.0 -o " +
                  (tmp.path / "hot.json").string(), tmp.path).exit_code == 0);
  RunResult hot = run_cli("bound --mode awgn --net " + (tmp.path / "hot.json").string() +
                          " --delta 0.01 -o " + (tmp.path / "bad.json").string(), tmp.path);
  CHECK(hot.exit_code == 1);
  CHECK(hot.stderr_text.find("P g(r_ij) <= 1") != std::string::npos);
  CHECK(hot.stderr_text.find("(") != std::string::npos);
}

TEST_CASE("delay subcommand on the grid router") {
  TempDir tmp;
  CHECK(run_cli("delay --grid 3 --rate 0.5 -o " + (tmp.path / "d.json").string(), tmp.path)
            .exit_code == 0);
  const json d = json::parse(pmflab::io::read_file(tmp.path / "d.json"));
  std::vector<pmflab::FlowPath> paths = pmflab::grid_umf_paths(3, 0.5);
  double hops = 0.0;
  for (const auto& p : paths) hops += static_cast<double>(p.nodes.size() - 1) * p.flow;
  CHECK(d["S_n"].get<double>() == doctest::Approx(hops));
  CHECK(d["D_n"].get<double>() == doctest::Approx(hops / (0.5 * 72)));

  // paths file with an inconsistent lambda is a runtime failure (exit 1)
  json bad;
  bad["paths"] = json::array({json{{"nodes", json::array({0, 1})}, {"flow", 1.0}}});
  bad["lam"] = pmflab::io::traffic_to_json(pmflab::TrafficMatrix(2));
  pmflab::io::write_file(tmp.path / "bad.json", bad.dump());
  CHECK(run_cli("delay --paths " + (tmp.path / "bad.json").string() + " -o " +
                (tmp.path / "o.json").string(), tmp.path).exit_code == 1);
}

TEST_CASE("experiment runs are byte-identical") {
  TempDir tmp;
  const std::string args = "experiment scaling-comb --ns 16 --trials 2 --seed 1 -o ";
  CHECK(run_cli(args + (tmp.path / "r1").string(), tmp.path).exit_code == 0);
  CHECK(run_cli(args + (tmp.path / "r2").string(), tmp.path).exit_code == 0);
  CHECK(pmflab::io::read_file(tmp.path / "r1" / "rows.csv") ==
        pmflab::io::read_file(tmp.path / "r2" / "rows.csv"));
  CHECK(pmflab::io::read_file(tmp.path / "r1" / "summary.json") ==
        pmflab::io::read_file(tmp.path / "r2" / "summary.json"));
  const json summary = json::parse(pmflab::io::read_file(tmp.path / "r1" / "summary.json"));
  CHECK(summary["rows"] == 2);

  CHECK(run_cli("experiment scaling-fading --ns 16 --trials 1 --seed 2 --alpha 3.5 -o " +
                (tmp.path / "r3").string(), tmp.path).exit_code == 0);
  CHECK(fs::exists(tmp.path / "r3" / "rows.csv"));
  CHECK(fs::exists(tmp.path / "r3" / "provenance.json"));
}

TEST_CASE("missing input file is a runtime failure") {
  TempDir tmp;
  CHECK(run_cli("cut --graph " + (tmp.path / "nope.json").string() + " -o " +
                (tmp.path / "o.json").string(), tmp.path).exit_code == 1);
}

TEST_CASE("config file supplies flags and the command line wins") {
  TempDir tmp;
  pmflab::io::write_file(tmp.path / "gen.ini",
                         "[gen]\nmodel=geometric\nn=9\nseed=4\nout=" +
                             (tmp.path / "from_cfg.json").string() + "\n");
  CHECK(run_cli("--config " + (tmp.path / "gen.ini").string() + " gen", tmp.path).exit_code == 0);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "from_cfg.json"))["points"].size() == 9);

  // flag overrides the config value
  CHECK(run_cli("--config " + (tmp.path / "gen.ini").string() + " gen --n 4 -o " +
                (tmp.path / "override.json").string(), tmp.path).exit_code == 0);
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "override.json"))["points"].size() == 4);
}

TEST_CASE("PMFLAB_LIMITS lowers the enumeration cap") {
  TempDir tmp;
  pmflab::CapGraph path(4, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0},
                            {2, 3, 1.0}, {3, 2, 1.0}});
  pmflab::io::write_file(tmp.path / "path.json", pmflab::io::graph_to_json(path).dump());
  const fs::path err = tmp.path / "stderr.txt";
  const std::string cmd = "PMFLAB_LIMITS=enum=3,lp_rows=900 " + std::string(PMFLAB_CLI_PATH) +
                          " cut --graph " + (tmp.path / "path.json").string() + " -o " +
                          (tmp.path / "cut.json").string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  CHECK(WEXITSTATUS(raw) == 0);
  // above the cap the sweep heuristic answers, flagged as such
  CHECK(json::parse(pmflab::io::read_file(tmp.path / "cut.json"))["heuristic"].get<bool>());
}
