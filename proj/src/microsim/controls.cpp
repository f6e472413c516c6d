#include "roadsim/microsim/controls.hpp"

#include <algorithm>
#include <cmath>

#include "roadsim/csv.hpp"

namespace roadsim::sim {

std::vector<Control> read_controls_csv(const std::filesystem::path& path, const RoadGraph& g) {
  csv::Reader in(path);
  in.expect_header_prefix({"node_id", "control"});
  std::vector<Control> out(g.node_count(), Control::uncontrolled);
  std::vector<std::string> f;
  while (in.next(f)) {
    if (f.size() < 2) in.fail("expected 2 columns");
    const NodeId id = in.to_int(f[0], "node_id");
    Control c;
    if (f[1] == "stop") {
      c = Control::stop;
    } else if (f[1] == "signal") {
      c = Control::signal;
    } else {
      in.fail("control must be stop or signal, got '" + f[1] + "'");
    }
    if (const auto i = g.find_node(id)) out[*i] = c;
  }
  return out;
}

bool signal_allows(const SimNetwork& net, std::size_t in_edge, std::size_t out_edge, double t,
                   double phase_duration) {
  const std::size_t node = net.to(in_edge);
  const std::size_t n = net.graph().in_edges(node).size();
  const std::size_t m = net.graph().out_edges(node).size();
  const auto phase = static_cast<std::size_t>(std::floor(t / phase_duration)) % (n * m);
  return phase == net.in_rank(in_edge) * m + net.out_rank(out_edge);
}

void StopQueue::enqueue(std::uint32_t vehicle) {
  if (granted_ == vehicle || contains(vehicle)) return;
  queue_.push_back(vehicle);
}

void StopQueue::grant_next() {
  if (granted_ || queue_.empty()) return;
  granted_ = queue_.front();
  queue_.pop_front();
}

bool StopQueue::contains(std::uint32_t vehicle) const {
  return std::find(queue_.begin(), queue_.end(), vehicle) != queue_.end();
}

}  // namespace roadsim::sim
