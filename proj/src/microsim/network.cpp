#include "roadsim/microsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roadsim/error.hpp"
#include "roadsim/geo.hpp"

namespace roadsim::sim {

namespace {

// Heading of the edge as it leaves its tail / arrives at its head.
double start_bearing(const RoadGraph& g, std::size_t e) {
  const auto& geom = g.edge(e).geometry;
  if (geom.size() >= 2) return bearing_deg(geom[0], geom[1]);
  return bearing_deg(g.node(g.from_index(e)).position(), g.node(g.to_index(e)).position());
}

double end_bearing(const RoadGraph& g, std::size_t e) {
  const auto& geom = g.edge(e).geometry;
  if (geom.size() >= 2) return bearing_deg(geom[geom.size() - 2], geom.back());
  return bearing_deg(g.node(g.from_index(e)).position(), g.node(g.to_index(e)).position());
}

// Clockwise turn in (-180, 180]; positive turns right.
double turn_angle(double from_deg, double to_deg) {
  double d = std::fmod(to_deg - from_deg, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace

SimNetwork::SimNetwork(const RoadGraph& g, std::vector<Control> controls)
    : graph_(&g), control_(std::move(controls)) {
  const std::size_t m = g.edge_count();
  if (control_.empty()) control_.assign(g.node_count(), Control::uncontrolled);
  if (control_.size() != g.node_count()) throw ConfigError("controls must cover every node");
  length_.resize(m);
  speed_.resize(m);
  lanes_.resize(m);
  cells_.resize(m);
  in_rank_.resize(m);
  out_rank_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& ed = g.edge(e);
    if (!ed.bpr || !ed.lanes) throw InvalidGraph("simulation needs lanes and BPR coefficients");
    length_[e] = ed.length;
    speed_[e] = ed.bpr->free_flow_speed_mps;
    lanes_[e] = *ed.lanes;
    cells_[e] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ed.length)));
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto in = g.in_edges(i);
    const auto out = g.out_edges(i);
    for (std::size_t r = 0; r < in.size(); ++r) in_rank_[in[r]] = r;
    for (std::size_t r = 0; r < out.size(); ++r) out_rank_[out[r]] = r;
  }
  std::vector<double> angle;
  std::vector<std::size_t> order;
  for (std::size_t e = 0; e < m; ++e) {
    const auto out = g.out_edges(g.to_index(e));
    const double heading = end_bearing(g, e);
    angle.resize(out.size());
    for (std::size_t k = 0; k < out.size(); ++k)
      angle[k] = turn_angle(heading, start_bearing(g, out[k]));
    order.resize(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return angle[a] > angle[b]; });
    const std::size_t base = turn_rank_.size();
    turn_rank_.resize(base + out.size());
    for (std::size_t r = 0; r < order.size(); ++r)
      turn_rank_[base + order[r]] = static_cast<std::uint32_t>(r);
    turn_offsets_.push_back(turn_rank_.size());
  }
}

int SimNetwork::required_lane(std::size_t in, std::size_t out) const {
  const int n = lanes_[in];
  const std::size_t k = turn_offsets_[in + 1] - turn_offsets_[in];
  if (n <= 1 || k <= 1) return -1;
  const double r = turn_rank_[turn_offsets_[in] + out_rank_[out]];
  return static_cast<int>(std::lround(r * (n - 1) / static_cast<double>(k - 1)));
}

}  // namespace roadsim::sim
