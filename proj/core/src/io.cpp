#include "pmflab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pmflab::io {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

json region_to_json(const Region& region) {
  json j;
  switch (region.kind) {
    case Region::Kind::UnitSquare: j["kind"] = "unit_square"; break;
    case Region::Kind::Square: j["kind"] = "square"; j["side"] = region.side; break;
    case Region::Kind::Torus: j["kind"] = "torus"; j["side"] = region.side; break;
  }
  return j;
}

Region region_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit_square") return Region::unit_square();
  if (kind == "square") return Region::square(j.at("side").get<double>());
  if (kind == "torus") return Region::torus(j.at("side").get<double>());
  throw std::invalid_argument("unknown region kind: " + kind);
}

json graph_to_json(const CapGraph& g) {
  json j;
  j["n"] = g.node_count();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back(json::array({e.tail, e.head, e.capacity}));
  j["edges"] = std::move(edges);
  return j;
}

CapGraph graph_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  return CapGraph(n, std::move(edges));
}

json network_to_json(const Network& net) {
  json j;
  j["region"] = region_to_json(net.region);
  json pts = json::array();
  for (const Point& p : net.points) pts.push_back(json::array({p.x, p.y}));
  j["points"] = std::move(pts);
  j["P"] = net.power;
  if (net.pathloss.kind == Pathloss::Kind::InversePoly) {
    j["pathloss"] = {{"kind", "inverse_poly"}, {"alpha", net.pathloss.alpha}};
  } else {
    json table = json::array();
    for (const auto& [x, g] : net.pathloss.table) table.push_back(json::array({x, g}));
    j["pathloss"] = {{"kind", "table"}, {"table", std::move(table)}};
  }
  if (net.n0b) j["N0B"] = *net.n0b;
  return j;
}

Network network_from_json(const json& j) {
  Network net;
  net.region = region_from_json(j.at("region"));
  for (const auto& p : j.at("points"))
    net.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  net.power = j.at("P").get<double>();
  const json& pl = j.at("pathloss");
  const std::string kind = pl.at("kind").get<std::string>();
  if (kind == "inverse_poly") {
    net.pathloss = Pathloss::inverse_poly(pl.at("alpha").get<double>());
  } else if (kind == "table") {
    std::vector<std::pair<double, double>> table;
    for (const auto& row : pl.at("table"))
      table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    net.pathloss = Pathloss::from_table(std::move(table));
  } else {
    throw std::invalid_argument("unknown pathloss kind: " + kind);
  }
  if (j.contains("N0B")) net.n0b = j.at("N0B").get<double>();
  return net;
}

json points_to_json(const Region& region, std::span<const Point> points) {
  json j;
  j["region"] = region_to_json(region);
  json pts = json::array();
  for (const Point& p : points) pts.push_back(json::array({p.x, p.y}));
  j["points"] = std::move(pts);
  return j;
}

std::pair<Region, std::vector<Point>> points_from_json(const json& j) {
  Region region = region_from_json(j.at("region"));
  std::vector<Point> points;
  for (const auto& p : j.at("points"))
    points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return {region, std::move(points)};
}

json traffic_to_json(const TrafficMatrix& lam) {
  json j;
  j["n"] = lam.size();
  json rows = json::array();
  for (int i = 0; i < lam.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < lam.size(); ++k) row.push_back(lam(i, k));
    rows.push_back(std::move(row));
  }
  j["lam"] = std::move(rows);
  return j;
}

TrafficMatrix traffic_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : j.at("lam"))
    for (const auto& v : row) data.push_back(v.get<double>());
  return TrafficMatrix(n, std::move(data));
}

json cut_to_json(const Cut& cut) {
  json j;
  j["side_s"] = cut.side_s;
  j["cut_capacity"] = cut.cut_capacity;
  j["sparsity"] = cut.sparsity;
  return j;
}

json flow_solution_to_json(const FlowSolution& sol, const CapGraph* graph) {
  json j;
  j["f"] = sol.f;
  j["status"] = to_string(sol.status);
  if (graph != nullptr && !sol.flows.empty()) {
    json flows = json::array();
    for (const CommodityFlow& cf : sol.flows)
      for (std::size_t e = 0; e < cf.edge_flow.size(); ++e)
        if (cf.edge_flow[e] > 1e-12)
          flows.push_back(json::array({cf.source, graph->edges()[e].tail, graph->edges()[e].head,
                                       cf.edge_flow[e]}));
    j["flows"] = std::move(flows);
  }
  if (sol.approximate) j["approximate"] = true;
  return j;
}

json bound_report_to_json(const BoundReport& report) {
  json j;
  j["lower"] = report.lower;
  j["upper"] = report.upper;
  // infinities serialize as null; consumers treat null gap as lower == 0
  j["gap_factor"] = report.gap_factor;
  if (report.upper_witness) j["upper_witness"] = report.upper_witness->side_s;
  json meta = json::object();
  for (const auto& [key, value] : report.metadata) meta[key] = value;
  j["metadata"] = std::move(meta);
  return j;
}

json conflict_model_to_json(const ConflictModel& model) {
  json j;
  j["graph"] = graph_to_json(model.graph);
  json inter = json::object();
  const auto& edges = model.graph.edges();
  for (std::size_t e = 0; e < model.interferes.size(); ++e) {
    const std::string key =
        std::to_string(edges[e].tail) + "," + std::to_string(edges[e].head);
    json list = json::array();
    for (int other : model.interferes[e])
      list.push_back(json::array({edges[other].tail, edges[other].head}));
    inter[key] = std::move(list);
  }
  j["interferes"] = std::move(inter);
  return j;
}

ConflictModel conflict_model_from_json(const json& j) {
  ConflictModel model;
  model.graph = graph_from_json(j.at("graph"));
  const auto& edges = model.graph.edges();
  auto edge_index = [&](int tail, int head) {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].tail == tail && edges[e].head == head) return static_cast<int>(e);
    throw std::invalid_argument("interference references unknown edge (" + std::to_string(tail) +
                                "," + std::to_string(head) + ")");
  };
  model.interferes.assign(edges.size(), {});
  for (const auto& [key, list] : j.at("interferes").items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad interference key: " + key);
    const int tail = std::stoi(key.substr(0, comma));
    const int head = std::stoi(key.substr(comma + 1));
    const int e = edge_index(tail, head);
    for (const auto& pair : list)
      model.interferes[e].push_back(edge_index(pair.at(0).get<int>(), pair.at(1).get<int>()));
  }
  return model;
}

json paths_to_json(std::span<const FlowPath> paths, const TrafficMatrix& lam) {
  json j;
  json list = json::array();
  for (const FlowPath& p : paths) {
    json entry;
    entry["nodes"] = p.nodes;
    entry["flow"] = p.flow;
    list.push_back(std::move(entry));
  }
  j["paths"] = std::move(list);
  j["lam"] = traffic_to_json(lam);
  return j;
}

std::pair<std::vector<FlowPath>, TrafficMatrix> paths_from_json(const json& j) {
  std::vector<FlowPath> paths;
  int max_node = -1;
  for (const auto& entry : j.at("paths")) {
    FlowPath p;
    for (const auto& v : entry.at("nodes")) {
      p.nodes.push_back(v.get<int>());
      max_node = std::max(max_node, p.nodes.back());
    }
    p.flow = entry.at("flow").get<double>();
    paths.push_back(std::move(p));
  }
  TrafficMatrix lam;
  if (j.contains("lam")) {
    lam = traffic_from_json(j.at("lam"));
  } else {
    // Derive demands from the decomposition itself.
    lam = TrafficMatrix(max_node + 1);
    for (const FlowPath& p : paths)
      lam.set(p.nodes.front(), p.nodes.back(), lam(p.nodes.front(), p.nodes.back()) + p.flow);
  }
  return {std::move(paths), std::move(lam)};
}

std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "n,trial,lower,upper,kappa_hat,delta_r,slope_group,status\n";
  for (const ExperimentRow& row : result.rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.trial) + "," + fmt_double(row.lower) +
           "," + fmt_double(row.upper) + "," + fmt_double(row.kappa_hat) + "," +
           fmt_double(row.delta_r) + "," + row.slope_group + "," + row.status + "\n";
  }
  return out;
}

json experiment_summary_json(const ExperimentResult& result) {
  json j;
  json slopes = json::object();
  for (const auto& [name, fit] : result.slopes) {
    slopes[name] = {{"slope", fit.slope}, {"half_width", fit.half_width}, {"points", fit.points}};
  }
  j["slopes"] = std::move(slopes);
  j["rows"] = result.rows.size();
  j["excluded"] = result.excluded;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

}  // namespace pmflab::io
