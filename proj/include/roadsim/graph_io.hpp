#pragma once

#include <filesystem>
#include <string>

#include "roadsim/graph.hpp"

namespace roadsim {

/// alpha/beta attached to coefficients read back from an enriched edges file,
/// which stores a0/a4 but not the exponent parameters themselves.
struct BprParameters {
  double alpha = 0.15;
  double beta = 4.0;
};

/// Reads `id,lat,lon` nodes and `from,to,key,road_type,length,lanes,maxspeed,geometry`
/// edges. Enriched edge files (six extra columns) are accepted and restore the
/// BPR coefficients. Throws MalformedRow or DanglingEdge.
RoadGraph load_graph(const std::filesystem::path& nodes_file,
                     const std::filesystem::path& edges_file, BprParameters params = {});

std::string nodes_csv(const RoadGraph& g);
/// Appends `lanes_imputed,free_flow_speed_mps,capacity_vps,t0_s,a0,a4` when
/// every edge carries BPR coefficients.
std::string edges_csv(const RoadGraph& g);
std::string graphml(const RoadGraph& g);

}  // namespace roadsim
