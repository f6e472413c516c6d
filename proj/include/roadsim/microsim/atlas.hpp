#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roadsim/microsim/network.hpp"

namespace roadsim::sim {

/// Occupancy cells for every lane of every edge, one cell per meter. A cell
/// holds vehicle id + 1, or 0 when empty. Each lane is a chain of fixed-size
/// chunks drawn from one pool, so long roads stay in bounded blocks.
class TrafficAtlas {
 public:
  static constexpr std::size_t kChunkCells = 1000;

  struct Hit {
    std::uint32_t vehicle;
    std::size_t cell;
  };

  TrafficAtlas() = default;
  explicit TrafficAtlas(const SimNetwork& net);

  std::size_t cells(std::size_t edge) const { return cells_[edge]; }
  int lanes(std::size_t edge) const {
    return static_cast<int>(lane_base_[edge + 1] - lane_base_[edge]);
  }

  /// Occupant id of a cell, nullopt when empty.
  std::optional<std::uint32_t> at(std::size_t edge, int lane, std::size_t cell) const {
    const std::uint32_t v = slot(edge, lane, cell);
    if (v == 0) return std::nullopt;
    return v - 1;
  }

  void clear();
  /// Empties cells [first, last].
  void unmark(std::size_t edge, int lane, std::size_t first, std::size_t last);

  /// Marks cells [first, last] with the vehicle. Cells already held by
  /// another vehicle are left alone and counted; returns that count.
  std::size_t mark(std::size_t edge, int lane, std::size_t first, std::size_t last,
                   std::uint32_t vehicle);

  /// First occupant other than `self` in cells [from, to], scanning forward.
  std::optional<Hit> scan_forward(std::size_t edge, int lane, std::size_t from, std::size_t to,
                                  std::uint32_t self) const;
  /// First occupant other than `self` in cells [to, from], scanning backward.
  std::optional<Hit> scan_backward(std::size_t edge, int lane, std::size_t from, std::size_t to,
                                   std::uint32_t self) const;
  /// True when any cell in [first, last] holds a vehicle other than `self`.
  bool occupied(std::size_t edge, int lane, std::size_t first, std::size_t last,
                std::uint32_t self) const;

  /// Number of occupied cells, for tests.
  std::size_t occupied_cells() const;

 private:
  std::uint32_t& slot(std::size_t edge, int lane, std::size_t cell) {
    const std::size_t chunk = chunk_table_[lane_chunks_[lane_base_[edge] + lane] + cell / kChunkCells];
    return pool_[chunk * kChunkCells + cell % kChunkCells];
  }
  std::uint32_t slot(std::size_t edge, int lane, std::size_t cell) const {
    const std::size_t chunk = chunk_table_[lane_chunks_[lane_base_[edge] + lane] + cell / kChunkCells];
    return pool_[chunk * kChunkCells + cell % kChunkCells];
  }

  std::vector<std::size_t> cells_;
  std::vector<std::size_t> lane_base_{0};   // first lane slot of each edge
  std::vector<std::size_t> lane_chunks_;    // first chunk_table_ entry of each lane
  std::vector<std::size_t> chunk_table_;    // chunk ids, lane by lane
  std::vector<std::uint32_t> pool_;
};

}  // namespace roadsim::sim
