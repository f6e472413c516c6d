#include "roadsim/microsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "roadsim/error.hpp"
#include "roadsim/parallel.hpp"
#include "roadsim/types.hpp"

namespace roadsim::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t cell_of(double x) { return x <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(x)); }

// Cells under the span (rear, front] of one edge, clamped to the edge.
bool span_cells(double rear, double front, std::size_t cells, std::size_t& first,
                std::size_t& last) {
  last = std::min(cell_of(front), cells - 1);
  first = rear < 0.0 ? 0 : cell_of(rear) + 1;
  return first <= last;
}

std::uint64_t steps_per(double interval, double dt) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(interval / dt)));
}

}  // namespace

World::World(const SimNetwork& net, std::span<const Trip> trips, std::span<const Route> routes,
             const SimConfig& cfg, int iteration)
    : net_(&net), cfg_(cfg), iteration_(iteration) {
  if (routes.size() != trips.size()) throw ConfigError("one route per trip is required");
  if (!(cfg.dt > 0.0)) throw ConfigError("time step must be positive");
  vehicles_.resize(trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) {
    auto& s = vehicles_[i];
    s.id = static_cast<std::uint32_t>(i);
    s.cls = trips[i].cls;
    s.route = routes[i];
    s.departure = trips[i].departure;
    if (s.route.empty()) throw ConfigError("vehicle " + std::to_string(i) + " has an empty route");
  }
  waiting_.resize(vehicles_.size());
  std::iota(waiting_.begin(), waiting_.end(), 0u);
  std::stable_sort(waiting_.begin(), waiting_.end(), [&](std::uint32_t a, std::uint32_t b) {
    return vehicles_[a].departure < vehicles_[b].departure;
  });
  atlas_[0] = TrafficAtlas(net);
  atlas_[1] = TrafficAtlas(net);
  for (std::size_t i = 0; i < net.node_count(); ++i)
    if (net.control(i) == Control::stop) stops_.emplace(i, StopQueue{});
  edge_time_sum_.assign(net.edge_count(), 0.0);
  edge_time_count_.assign(net.edge_count(), 0);
}

double World::default_horizon() const {
  if (cfg_.horizon_s > 0.0) return cfg_.horizon_s;
  double last = 0.0;
  for (const auto& s : vehicles_) last = std::max(last, s.departure);
  return last + cfg_.drain_s;
}

void World::run(double horizon_s) {
  while (!finished() && t_ < horizon_s) step();
  if (step_ % steps_per(cfg_.sample_interval_s, cfg_.dt) == 0) sample();
}

std::size_t World::active_count() const {
  return static_cast<std::size_t>(std::count_if(vehicles_.begin(), vehicles_.end(), [](const auto& s) {
    return s.status == Status::active;
  }));
}

const StopQueue* World::stop_queue(std::size_t node) const {
  const auto it = stops_.find(node);
  return it == stops_.end() ? nullptr : &it->second;
}

void World::step() {
  if (step_ % steps_per(cfg_.sample_interval_s, cfg_.dt) == 0) sample();
  activate();
  update_controls();

  std::vector<Intent> intents(active_.size());
  constexpr std::size_t kBatch = 256;
  const std::size_t batches = (active_.size() + kBatch - 1) / kBatch;
  parallel_for(batches, cfg_.workers, [&](std::size_t b) {
    const std::size_t end = std::min(active_.size(), (b + 1) * kBatch);
    for (std::size_t k = b * kBatch; k < end; ++k) intents[k] = plan(vehicles_[active_[k]]);
  });

  resolve(intents);
  write_atlas();
  ++step_;
  t_ = static_cast<double>(step_) * cfg_.dt;
}

void World::activate() {
  while (next_waiting_ < waiting_.size() && vehicles_[waiting_[next_waiting_]].departure <= t_)
    ready_.push_back(waiting_[next_waiting_++]);
  if (ready_.empty()) return;
  auto& atlas = atlas_[cur_];
  std::vector<std::uint32_t> still;
  bool any = false;
  for (auto id : ready_) {
    auto& s = vehicles_[id];
    const std::size_t e = s.route.front();
    const double pos = std::min(net_->length(e), params(s).length);
    const std::size_t last = std::min(cell_of(pos), atlas.cells(e) - 1);
    int lane = -1;
    for (int l = 0; l < net_->lanes(e); ++l) {
      if (!atlas.occupied(e, l, 0, last, id)) {
        lane = l;
        break;
      }
    }
    if (lane < 0) {
      still.push_back(id);
      continue;
    }
    atlas.mark(e, lane, 0, last, id);
    marks_[cur_].push_back({e, lane, 0, last});
    s.status = Status::active;
    s.lane = lane;
    s.pos = pos;
    s.v = 0.0;
    s.edge_entry = t_;
    s.travel_time = t_ - s.departure;
    ++departed_;
    active_.push_back(id);
    any = true;
  }
  ready_ = std::move(still);
  if (any) std::sort(active_.begin(), active_.end());
}

void World::update_controls() {
  if (stops_.empty()) return;
  for (auto& [node, queue] : stops_) {
    const auto holder = queue.granted();
    if (!holder) continue;
    const auto& h = vehicles_[*holder];
    const std::size_t approach = granted_edge_.at(node);
    const bool through = h.route_index > approach + 1 ||
                         (h.route_index == approach + 1 && h.pos >= params(h).length);
    if (h.arrived() || through) queue.release();
  }
  for (auto id : active_) {
    const auto& s = vehicles_[id];
    if (s.route_index + 1 >= s.route.size()) continue;
    const std::size_t e = s.edge();
    const std::size_t node = net_->to(e);
    if (net_->control(node) != Control::stop) continue;
    if (net_->length(e) - s.pos <= cfg_.stop_zone_m) stops_.at(node).enqueue(id);
  }
  for (auto& [node, queue] : stops_) {
    const bool idle = !queue.granted();
    queue.grant_next();
    if (idle && queue.granted()) granted_edge_[node] = vehicles_[*queue.granted()].route_index;
  }
}

bool World::may_cross(const VehicleState& s) const {
  if (s.route_index + 1 >= s.route.size()) return true;
  const std::size_t e = s.edge();
  const std::size_t node = net_->to(e);
  switch (net_->control(node)) {
    case Control::uncontrolled:
      return true;
    case Control::signal:
      return signal_allows(*net_, e, s.route[s.route_index + 1], t_, cfg_.phase_duration);
    case Control::stop:
      return stops_.at(node).granted() == s.id;
  }
  return true;
}

double World::rear_in_frame(std::uint32_t other, std::size_t edge) const {
  const auto& o = vehicles_[other];
  const double rear = o.pos - params(o).length;
  if (o.edge() == edge) return rear;
  return net_->length(edge) + rear;  // tail left behind on `edge`
}

World::Leader World::leader_in_lane(const VehicleState& s, std::size_t edge, int lane,
                                    double pos) const {
  const auto hit = atlas_[cur_].scan_forward(edge, lane, cell_of(pos) + 1,
                                             cell_of(pos + cfg_.lookahead_m), s.id);
  if (!hit) return {};
  return {rear_in_frame(hit->vehicle, edge) - pos, vehicles_[hit->vehicle].v};
}

int World::approach_lane(std::size_t next_edge, double range, std::uint32_t self,
                         double* space) const {
  int best = 0;
  double best_space = -kInf, best_v = 0.0;
  for (int l = 0; l < net_->lanes(next_edge); ++l) {
    const auto hit =
        atlas_[cur_].scan_forward(next_edge, l, 0, cell_of(std::max(range, 0.0)), self);
    const double gap = hit ? rear_in_frame(hit->vehicle, next_edge) : kInf;
    if (gap > best_space) {
      best = l;
      best_space = gap;
      best_v = hit ? vehicles_[hit->vehicle].v : 0.0;
    }
  }
  if (space) {
    space[0] = best_space;
    space[1] = best_v;
  }
  return best;
}

double World::lag_gap(const VehicleState& s, int lane, std::optional<Follower>* follower) const {
  const std::size_t e = s.edge();
  const std::size_t front = cell_of(s.pos);
  const std::size_t reach = cell_of(cfg_.lookahead_m);
  const auto hit =
      atlas_[cur_].scan_backward(e, lane, front, front > reach ? front - reach : 0, s.id);
  if (!hit) return kInf;
  const auto& o = vehicles_[hit->vehicle];
  *follower = Follower{o.v, &params(o)};
  if (o.edge() != e) return -1.0;  // a tail beside us: overlap
  return (s.pos - params(s).length) - o.pos;
}

World::Intent World::plan(const VehicleState& s) const {
  const std::size_t e = s.edge();
  const double length = net_->length(e);
  const auto& p = params(s);
  const bool has_next = s.route_index + 1 < s.route.size();
  const double remaining = length - s.pos;

  Intent in{s.lane, false, s.lc_mode, s.v, s.pos, -1};
  if (net_->lanes(e) > 1 && s.tail_edge == kNoEdge) {
    LaneChangeInput lc;
    lc.lane = s.lane;
    lc.required_lane = has_next ? net_->required_lane(e, s.route[s.route_index + 1]) : -1;
    lc.dist_to_exit = remaining;
    lc.mode = s.lc_mode;
    lc.current_lead_gap = leader_in_lane(s, e, s.lane, s.pos).gap;
    lc.lambda = cfg_.lambda;
    lc.gain_m = cfg_.gain_m;
    lc.draw = hashed_uniform(cfg_.seed, static_cast<std::uint64_t>(iteration_), s.id, step_);
    auto look = [&](int lane, AdjacentLane& side) {
      side.exists = lane >= 0 && lane < net_->lanes(e);
      if (!side.exists) return;
      side.lead_gap = leader_in_lane(s, e, lane, s.pos).gap;
      std::optional<Follower> follower;
      const double lag = lag_gap(s, lane, &follower);
      side.acceptable = gap_acceptance(side.lead_gap, lag, s.v, p, follower);
    };
    look(s.lane - 1, lc.right);
    look(s.lane + 1, lc.left);
    const auto r = lane_change_decision(lc);
    in.mode = r.mode;
    in.lane = r.lane;
    in.changed = r.lane != s.lane;
  }

  Leader lead = leader_in_lane(s, e, in.lane, s.pos);
  if (has_next && remaining < cfg_.lookahead_m) {
    const std::size_t f = s.route[s.route_index + 1];
    double space[2];
    in.next_lane = approach_lane(f, cfg_.lookahead_m - remaining, s.id, space);
    if (!may_cross(s)) {
      if (remaining < lead.gap) lead = {remaining, 0.0};
    } else if (std::isinf(lead.gap) && !std::isinf(space[0])) {
      lead = {remaining + space[0], space[1]};
    }
  }

  const double acc = idm_acceleration(s.v, desired_speed(s, e), lead.gap, s.v - lead.v, p);
  in.v = std::max(0.0, s.v + acc * cfg_.dt);
  in.pos = s.pos + in.v * cfg_.dt;
  return in;
}

void World::resolve(std::vector<Intent>& intents) {
  struct Move {
    std::size_t edge;
    int lane;
    double pos, v;
    bool transferred = false, arriving = false, changed = false;
    std::size_t from_edge = kNoEdge;
    int from_lane = 0;
  };
  const std::size_t n = active_.size();
  std::vector<Move> moves(n);

  // Edge ends: arrive, halt at the stop line, or transfer.
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = vehicles_[active_[k]];
    const auto& in = intents[k];
    const std::size_t e = s.edge();
    const double length = net_->length(e);
    Move& m = moves[k];
    m = {e, in.lane, in.pos, in.v};
    m.changed = in.changed;
    if (in.pos < length) continue;
    m.lane = s.lane;
    m.changed = false;
    if (s.route_index + 1 >= s.route.size()) {
      m.arriving = true;
      m.pos = length;
    } else if (!may_cross(s)) {
      m.pos = length;
      m.v = 0.0;
    } else {
      const std::size_t f = s.route[s.route_index + 1];
      const int lf = in.next_lane >= 0 ? in.next_lane
                                        : approach_lane(f, cfg_.lookahead_m, s.id, nullptr);
      m.transferred = true;
      m.from_edge = e;
      m.from_lane = s.lane;
      m.edge = f;
      m.lane = lf;
      m.pos = std::min(in.pos - length, net_->length(f));
      m.v = std::min(in.v, desired_speed(s, f));
    }
  }

  auto key = [](std::size_t edge, int lane) {
    return (static_cast<std::uint64_t>(edge) << 8) | static_cast<std::uint64_t>(lane);
  };
  auto len_of = [&](std::size_t k) { return params(vehicles_[active_[k]]).length; };
  auto overlaps = [](double rear_a, double front_a, double rear_b, double front_b) {
    return rear_a < front_b && rear_b < front_a;
  };
  // Spans (rear, front] per lane from the moves accepted so far. Tails count
  // as spans on the edge they trail over.
  std::unordered_map<std::uint64_t, std::vector<std::pair<double, double>>> spans;
  auto add_span = [&](std::size_t k) {
    const Move& m = moves[k];
    if (m.arriving) return;
    const double rear = m.pos - len_of(k);
    spans[key(m.edge, m.lane)].emplace_back(rear, m.pos);
    std::size_t tail_edge = kNoEdge;
    int tail_lane = 0;
    if (m.transferred) {
      tail_edge = m.from_edge;
      tail_lane = m.from_lane;
    } else {
      tail_edge = vehicles_[active_[k]].tail_edge;
      tail_lane = vehicles_[active_[k]].tail_lane;
    }
    if (tail_edge != kNoEdge && rear < 0.0) {
      const double le = net_->length(tail_edge);
      spans[key(tail_edge, tail_lane)].emplace_back(le + rear, le);
    }
  };
  auto clashes = [&](std::size_t k) {
    const Move& m = moves[k];
    const auto it = spans.find(key(m.edge, m.lane));
    if (it == spans.end()) return false;
    const double rear = m.pos - len_of(k);
    return std::any_of(it->second.begin(), it->second.end(), [&](const auto& sp) {
      return overlaps(rear, m.pos, sp.first, sp.second);
    });
  };

  // Lane changers yield to vehicles that kept their lane; among changers the
  // lower id goes first. Transfers are settled afterwards.
  for (std::size_t k = 0; k < n; ++k)
    if (!moves[k].changed && !moves[k].transferred) add_span(k);
  for (std::size_t k = 0; k < n; ++k) {
    if (!moves[k].changed) continue;
    if (clashes(k)) {
      moves[k].lane = vehicles_[active_[k]].lane;
      moves[k].changed = false;
      intents[k].mode = vehicles_[active_[k]].lc_mode;
    }
    add_span(k);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!moves[k].transferred) continue;
    if (clashes(k)) {
      const auto& s = vehicles_[active_[k]];
      moves[k] = {s.edge(), s.lane, net_->length(s.edge()), 0.0};
    }
    add_span(k);
  }

  // Front-to-back clipping per lane so nobody ends inside the vehicle ahead.
  // Two passes so that tails reflect clipped fronts.
  struct Entry {
    double front, rear;
    std::size_t k;
    bool tail;
  };
  for (int pass = 0; pass < 2; ++pass) {
    std::unordered_map<std::uint64_t, std::vector<Entry>> lanes;
    for (std::size_t k = 0; k < n; ++k) {
      const Move& m = moves[k];
      if (m.arriving) continue;
      const double rear = m.pos - len_of(k);
      lanes[key(m.edge, m.lane)].push_back({m.pos, rear, k, false});
      const auto& s = vehicles_[active_[k]];
      const std::size_t te = m.transferred ? m.from_edge : s.tail_edge;
      const int tl = m.transferred ? m.from_lane : s.tail_lane;
      if (te != kNoEdge && rear < 0.0) {
        const double le = net_->length(te);
        lanes[key(te, tl)].push_back({le, le + rear, k, true});
      }
    }
    for (auto& [_, list] : lanes) {
      if (list.size() < 2) continue;
      std::sort(list.begin(), list.end(), [&](const Entry& a, const Entry& b) {
        if (a.front != b.front) return a.front > b.front;
        if (a.tail != b.tail) return a.tail;
        return active_[a.k] < active_[b.k];
      });
      double limit = list.front().rear;
      double limit_v = moves[list.front().k].v;
      for (std::size_t i = 1; i < list.size(); ++i) {
        Entry& en = list[i];
        if (!en.tail && en.front > limit) {
          Move& m = moves[en.k];
          m.pos = std::max(limit, 0.0);
          m.v = std::min(m.v, limit_v);
          en.rear = m.pos - len_of(en.k);
        }
        if (en.rear < limit) {
          limit = en.rear;
          limit_v = moves[en.k].v;
        }
      }
    }
  }

  // Commit and account.
  const double dt = cfg_.dt;
  const double t_next = t_ + dt;
  std::vector<std::uint32_t> still_active;
  still_active.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& s = vehicles_[active_[k]];
    const Move& m = moves[k];
    const std::size_t e = s.edge();
    double distance;
    if (m.transferred) {
      distance = (net_->length(e) - s.pos) + m.pos;
    } else {
      distance = std::max(0.0, m.pos - s.pos);
    }
    s.a = (m.v - s.v) / dt;
    s.v = m.v;
    s.cum_distance += distance;
    s.cum_fuel += fuel_rate(s.v, s.a) * dt;
    s.cum_co += co_emission_rate(s.v / kMphToMps) * dt;
    s.travel_time += dt;
    s.lc_mode = intents[k].mode;
    if (m.arriving || m.transferred) {
      edge_time_sum_[e] += t_next - s.edge_entry;
      ++edge_time_count_[e];
      s.edge_entry = t_next;
    }
    if (m.arriving) {
      s.pos = m.pos;
      s.status = Status::arrived;
      s.tail_edge = kNoEdge;
      ++arrived_;
      continue;
    }
    if (m.transferred) {
      ++s.route_index;
      s.tail_edge = m.from_edge;
      s.tail_lane = m.from_lane;
      s.lc_mode = LaneMode::discretionary;
    }
    s.lane = m.lane;
    s.pos = m.pos;
    if (s.pos >= params(s).length) s.tail_edge = kNoEdge;
    still_active.push_back(s.id);
  }
  active_ = std::move(still_active);
}

void World::write_atlas() {
  const int next = 1 - cur_;
  auto& atlas = atlas_[next];
  for (const auto& f : marks_[next]) atlas.unmark(f.edge, f.lane, f.first, f.last);
  marks_[next].clear();
  std::unordered_map<std::uint64_t, std::size_t> per_lane;
  for (auto id : active_) {
    const auto& s = vehicles_[id];
    const std::size_t e = s.edge();
    const double rear = s.pos - params(s).length;
    std::size_t first, last;
    if (span_cells(rear, s.pos, atlas.cells(e), first, last)) {
      collisions_ += atlas.mark(e, s.lane, first, last, id);
      marks_[next].push_back({e, s.lane, first, last});
    }
    const std::uint64_t lane_key = (static_cast<std::uint64_t>(e) << 8) | static_cast<std::uint64_t>(s.lane);
    if (++per_lane[lane_key] > atlas.cells(e))
      throw AtlasOverflow("edge " + std::to_string(e) + " lane " + std::to_string(s.lane) +
                          " holds more vehicles than cells");
    if (s.tail_edge != kNoEdge && rear < 0.0) {
      const double le = net_->length(s.tail_edge);
      if (span_cells(le + rear, le, atlas.cells(s.tail_edge), first, last)) {
        collisions_ += atlas.mark(s.tail_edge, s.tail_lane, first, last, id);
        marks_[next].push_back({s.tail_edge, s.tail_lane, first, last});
      }
    }
  }
  cur_ = next;
}

void World::sample() {
  Conservation c;
  c.t = t_;
  c.departed = departed_;
  c.arrived = arrived_;
  c.active = active_count();
  conservation_.push_back(c);

  const auto group = static_cast<std::size_t>(std::floor(t_ / cfg_.group_interval_s));
  ++samples_per_group_[group];
  std::map<std::size_t, std::pair<std::size_t, double>> per_edge;  // count, speed sum
  for (auto id : active_) {
    auto& acc = per_edge[vehicles_[id].edge()];
    ++acc.first;
    acc.second += vehicles_[id].v;
  }
  for (const auto& [e, acc] : per_edge) {
    const double capacity =
        net_->length(e) * net_->lanes(e) / cfg_.space_per_vehicle_m;
    auto& slot = series_[{group, e}];
    slot.utilization += std::min(1.0, static_cast<double>(acc.first) / capacity);
    slot.speed += acc.second / static_cast<double>(acc.first);
    ++slot.speed_samples;
  }
}

std::vector<double> World::measured_edge_times() const {
  std::vector<double> out(edge_time_sum_.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t e = 0; e < out.size(); ++e)
    if (edge_time_count_[e] > 0) out[e] = edge_time_sum_[e] / static_cast<double>(edge_time_count_[e]);
  return out;
}

std::vector<EdgeInterval> World::edge_series() const {
  std::vector<EdgeInterval> out;
  out.reserve(series_.size());
  for (const auto& [key, acc] : series_) {
    const auto [group, edge] = key;
    const double samples = static_cast<double>(samples_per_group_.at(group));
    out.push_back({edge, static_cast<double>(group) * cfg_.group_interval_s,
                   acc.utilization / samples, acc.speed / static_cast<double>(acc.speed_samples)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.interval_start < b.interval_start;
  });
  return out;
}

}  // namespace roadsim::sim
