#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "pmflab/flow.hpp"
#include "pmflab/interference.hpp"
#include "pmflab/network.hpp"
#include "pmflab/random_net.hpp"

namespace pmflab::io {

// ordered_json keeps insertion order, so serialized output is deterministic.
using json = nlohmann::ordered_json;

json region_to_json(const Region& region);
Region region_from_json(const json& j);

json graph_to_json(const CapGraph& g);
CapGraph graph_from_json(const json& j);

json network_to_json(const Network& net);
Network network_from_json(const json& j);

json points_to_json(const Region& region, std::span<const Point> points);
std::pair<Region, std::vector<Point>> points_from_json(const json& j);

json traffic_to_json(const TrafficMatrix& lam);
TrafficMatrix traffic_from_json(const json& j);

json cut_to_json(const Cut& cut);

json flow_solution_to_json(const FlowSolution& sol, const CapGraph* graph = nullptr);

json bound_report_to_json(const BoundReport& report);

json conflict_model_to_json(const ConflictModel& model);
ConflictModel conflict_model_from_json(const json& j);

json paths_to_json(std::span<const FlowPath> paths, const TrafficMatrix& lam);
std::pair<std::vector<FlowPath>, TrafficMatrix> paths_from_json(const json& j);

// CSV rows in a fixed "%.12g" format so identical runs are byte-identical.
std::string experiment_csv(const ExperimentResult& result);
json experiment_summary_json(const ExperimentResult& result);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace pmflab::io
