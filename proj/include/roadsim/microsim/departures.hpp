#pragma once

#include <filesystem>
#include <random>
#include <vector>

namespace roadsim::sim {

struct DepartureBucket {
  double start_s = 0.0;
  double end_s = 0.0;
  double frequency = 0.0;
};

/// Relative departure frequencies over time buckets.
class DepartureHistogram {
 public:
  /// Sorts by start; throws ConfigError on overlap, empty buckets, negative
  /// frequencies or an all-zero histogram.
  explicit DepartureHistogram(std::vector<DepartureBucket> buckets);

  const std::vector<DepartureBucket>& buckets() const { return buckets_; }

  /// Bucket drawn with probability proportional to frequency, then a time
  /// uniform inside it.
  double sample(std::mt19937_64& rng) const;
  /// Uniform time inside bucket `index` (position in the sorted list).
  double sample_in(std::size_t index, std::mt19937_64& rng) const;

 private:
  std::vector<DepartureBucket> buckets_;
  std::vector<double> cumulative_;
};

std::vector<double> sample_departures(const DepartureHistogram& hist, std::size_t n,
                                      std::mt19937_64& rng);

/// `bucket_start_s,bucket_end_s,frequency`
DepartureHistogram read_departures_csv(const std::filesystem::path& path);

/// Uniform double in [0, 1) from the top 53 bits of one draw, so sampling is
/// identical across standard libraries.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace roadsim::sim
