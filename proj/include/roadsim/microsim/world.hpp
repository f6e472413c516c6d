#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "roadsim/microsim/atlas.hpp"
#include "roadsim/microsim/controls.hpp"
#include "roadsim/microsim/lane_change.hpp"
#include "roadsim/microsim/network.hpp"
#include "roadsim/microsim/physics.hpp"
#include "roadsim/microsim/routing.hpp"
#include "roadsim/shortest_path.hpp"

namespace roadsim::sim {

struct SimConfig {
  double dt = 0.5;
  double lambda = 300.0;          // lane-change ramp scale, m
  double phase_duration = 10.0;   // signal phase, s
  double lookahead_m = 500.0;
  double stop_zone_m = 10.0;      // distance from the stop line that joins the queue
  double gain_m = 10.0;           // discretionary lane-change threshold
  double sample_interval_s = 60.0;
  double group_interval_s = 360.0;
  double space_per_vehicle_m = 7.0;  // average length plus s0, for utilization
  double horizon_s = 0.0;         // 0: last departure + drain_s
  double drain_s = 7200.0;
  double truck_fraction = 0.0;
  int iterations = 4;
  int workers = 1;
  std::uint64_t seed = 0;
  VehicleParams car = VehicleParams::car();
  VehicleParams truck = VehicleParams::truck();

  const VehicleParams& params(VehicleClass c) const { return c == VehicleClass::car ? car : truck; }
};

enum class Status : std::uint8_t { pending, active, arrived };

struct VehicleState {
  std::uint32_t id = 0;
  VehicleClass cls = VehicleClass::car;
  Route route;
  std::size_t route_index = 0;
  int lane = 0;
  double pos = 0.0;  // front bumper, m from the start of the current edge
  double v = 0.0;
  double a = 0.0;    // realized over the last step
  double departure = 0.0;
  Status status = Status::pending;
  LaneMode lc_mode = LaneMode::discretionary;
  double cum_fuel = 0.0;      // mL
  double cum_co = 0.0;        // g
  double cum_distance = 0.0;  // m
  double travel_time = 0.0;   // s since scheduled departure
  double edge_entry = 0.0;
  // Edge and lane still under the rear of a vehicle that just crossed a node.
  std::size_t tail_edge = kNoEdge;
  int tail_lane = 0;

  bool arrived() const { return status == Status::arrived; }
  std::size_t edge() const { return route[route_index]; }
};

struct Conservation {
  double t = 0.0;
  std::size_t departed = 0;
  std::size_t arrived = 0;
  std::size_t active = 0;
};

/// Grouped utilization and speed for one edge over one interval.
struct EdgeInterval {
  std::size_t edge = 0;
  double interval_start = 0.0;
  double utilization = 0.0;
  double mean_speed = 0.0;
};

/// One run of the simulation over fixed routes. Each step reads the previous
/// step's atlas and vehicle states only; per-vehicle updates may run on
/// several threads without changing the result.
class World {
 public:
  /// `iteration` only salts the lane-change draws.
  World(const SimNetwork& net, std::span<const Trip> trips, std::span<const Route> routes,
        const SimConfig& cfg, int iteration = 1);

  void step();
  /// Steps until every vehicle has arrived or t reaches `horizon_s`.
  void run(double horizon_s);
  /// Horizon from the config: explicit, or last departure plus drain time.
  double default_horizon() const;

  double time() const { return t_; }
  std::uint64_t steps() const { return step_; }
  bool finished() const { return arrived_ == vehicles_.size(); }

  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const TrafficAtlas& atlas() const { return atlas_[cur_]; }
  const SimNetwork& network() const { return *net_; }
  std::size_t departed() const { return departed_; }
  std::size_t arrived_count() const { return arrived_; }
  std::size_t active_count() const;
  /// Cells claimed twice when writing an atlas, summed over the run.
  std::size_t collisions() const { return collisions_; }

  /// Mean traversal time of each edge; NaN for edges nobody left.
  std::vector<double> measured_edge_times() const;
  const std::vector<Conservation>& conservation() const { return conservation_; }
  std::vector<EdgeInterval> edge_series() const;

  /// Control state, for tests.
  const StopQueue* stop_queue(std::size_t node) const;

 private:
  struct Intent {
    int lane;
    bool changed;
    LaneMode mode;
    double v, pos;
    int next_lane;  // approach lane on the next edge, -1 when unknown
  };
  struct Leader {
    double gap = kNoLeader;
    double v = 0.0;
  };
  struct Footprint {
    std::size_t edge;
    int lane;
    std::size_t first, last;
  };

  void activate();
  void update_controls();
  Intent plan(const VehicleState& s) const;
  bool may_cross(const VehicleState& s) const;
  Leader leader_in_lane(const VehicleState& s, std::size_t edge, int lane, double pos) const;
  double rear_in_frame(std::uint32_t other, std::size_t edge) const;
  int approach_lane(std::size_t next_edge, double range, std::uint32_t self, double* space) const;
  double lag_gap(const VehicleState& s, int lane, std::optional<Follower>* follower) const;
  void resolve(std::vector<Intent>& intents);
  void write_atlas();
  void sample();
  const VehicleParams& params(const VehicleState& s) const { return cfg_.params(s.cls); }
  double desired_speed(const VehicleState& s, std::size_t edge) const {
    return net_->speed(edge) * params(s).v0_factor;
  }

  const SimNetwork* net_;
  SimConfig cfg_;
  int iteration_;
  std::vector<VehicleState> vehicles_;
  std::vector<std::uint32_t> waiting_;  // pending, by (departure, id)
  std::size_t next_waiting_ = 0;
  std::vector<std::uint32_t> ready_;    // due but blocked at the origin
  std::vector<std::uint32_t> active_;   // ascending id
  TrafficAtlas atlas_[2];
  std::vector<Footprint> marks_[2];
  int cur_ = 0;
  double t_ = 0.0;
  std::uint64_t step_ = 0;
  std::size_t departed_ = 0, arrived_ = 0, collisions_ = 0;
  std::map<std::size_t, StopQueue> stops_;
  std::map<std::size_t, std::size_t> granted_edge_;  // node -> approach edge of the holder
  std::vector<double> edge_time_sum_;
  std::vector<std::size_t> edge_time_count_;
  std::vector<Conservation> conservation_;
  struct Accumulator {
    double utilization = 0.0;
    double speed = 0.0;
    std::size_t speed_samples = 0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Accumulator> series_;  // (group, edge)
  std::map<std::size_t, std::size_t> samples_per_group_;
};

}  // namespace roadsim::sim
