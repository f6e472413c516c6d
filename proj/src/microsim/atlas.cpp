#include "roadsim/microsim/atlas.hpp"

#include <algorithm>

namespace roadsim::sim {

TrafficAtlas::TrafficAtlas(const SimNetwork& net) {
  const std::size_t m = net.edge_count();
  cells_.resize(m);
  std::size_t chunks = 0;
  for (std::size_t e = 0; e < m; ++e) {
    cells_[e] = net.cells(e);
    const std::size_t per_lane = (cells_[e] + kChunkCells - 1) / kChunkCells;
    for (int l = 0; l < net.lanes(e); ++l) {
      lane_chunks_.push_back(chunk_table_.size());
      for (std::size_t c = 0; c < per_lane; ++c) chunk_table_.push_back(chunks++);
    }
    lane_base_.push_back(lane_chunks_.size());
  }
  pool_.assign(chunks * kChunkCells, 0);
}

void TrafficAtlas::clear() { std::fill(pool_.begin(), pool_.end(), 0); }

void TrafficAtlas::unmark(std::size_t edge, int lane, std::size_t first, std::size_t last) {
  for (std::size_t c = first; c <= last; ++c) slot(edge, lane, c) = 0;
}

std::size_t TrafficAtlas::mark(std::size_t edge, int lane, std::size_t first, std::size_t last,
                               std::uint32_t vehicle) {
  std::size_t clashes = 0;
  for (std::size_t c = first; c <= last; ++c) {
    auto& s = slot(edge, lane, c);
    if (s == 0) {
      s = vehicle + 1;
    } else if (s != vehicle + 1) {
      ++clashes;
    }
  }
  return clashes;
}

std::optional<TrafficAtlas::Hit> TrafficAtlas::scan_forward(std::size_t edge, int lane,
                                                            std::size_t from, std::size_t to,
                                                            std::uint32_t self) const {
  to = std::min(to, cells_[edge] - 1);
  for (std::size_t c = from; c <= to; ++c) {
    const std::uint32_t s = slot(edge, lane, c);
    if (s != 0 && s != self + 1) return Hit{s - 1, c};
  }
  return std::nullopt;
}

std::optional<TrafficAtlas::Hit> TrafficAtlas::scan_backward(std::size_t edge, int lane,
                                                             std::size_t from, std::size_t to,
                                                             std::uint32_t self) const {
  from = std::min(from, cells_[edge] - 1);
  for (std::size_t c = from + 1; c-- > to;) {
    const std::uint32_t s = slot(edge, lane, c);
    if (s != 0 && s != self + 1) return Hit{s - 1, c};
  }
  return std::nullopt;
}

bool TrafficAtlas::occupied(std::size_t edge, int lane, std::size_t first, std::size_t last,
                            std::uint32_t self) const {
  return scan_forward(edge, lane, first, last, self).has_value();
}

std::size_t TrafficAtlas::occupied_cells() const {
  return static_cast<std::size_t>(std::count_if(pool_.begin(), pool_.end(),
                                                [](std::uint32_t s) { return s != 0; }));
}

}  // namespace roadsim::sim
