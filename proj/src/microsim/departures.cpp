#include "roadsim/microsim/departures.hpp"

#include <algorithm>

#include "roadsim/csv.hpp"
#include "roadsim/error.hpp"

namespace roadsim::sim {

DepartureHistogram::DepartureHistogram(std::vector<DepartureBucket> buckets)
    : buckets_(std::move(buckets)) {
  if (buckets_.empty()) throw ConfigError("departure histogram has no buckets");
  std::stable_sort(buckets_.begin(), buckets_.end(),
                   [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
  double total = 0.0;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    const auto& b = buckets_[i];
    if (!(b.end_s > b.start_s)) throw ConfigError("departure bucket must have end > start");
    if (!(b.frequency >= 0.0)) throw ConfigError("departure frequency must be >= 0");
    if (i > 0 && b.start_s < buckets_[i - 1].end_s)
      throw ConfigError("departure buckets overlap");
    total += b.frequency;
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) throw ConfigError("departure frequencies sum to zero");
}

double DepartureHistogram::sample(std::mt19937_64& rng) const {
  const double u = unit_draw(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return sample_in(static_cast<std::size_t>(it - cumulative_.begin()), rng);
}

double DepartureHistogram::sample_in(std::size_t index, std::mt19937_64& rng) const {
  if (index >= buckets_.size()) throw ConfigError("departure bucket index out of range");
  const auto& b = buckets_[index];
  return b.start_s + unit_draw(rng) * (b.end_s - b.start_s);
}

std::vector<double> sample_departures(const DepartureHistogram& hist, std::size_t n,
                                      std::mt19937_64& rng) {
  std::vector<double> out(n);
  for (auto& t : out) t = hist.sample(rng);
  return out;
}

DepartureHistogram read_departures_csv(const std::filesystem::path& path) {
  csv::Reader in(path);
  in.expect_header_prefix({"bucket_start_s", "bucket_end_s", "frequency"});
  std::vector<DepartureBucket> buckets;
  std::vector<std::string> f;
  while (in.next(f)) {
    if (f.size() < 3) in.fail("expected 3 columns");
    buckets.push_back({in.to_double(f[0], "bucket_start_s"), in.to_double(f[1], "bucket_end_s"),
                       in.to_double(f[2], "frequency")});
  }
  try {
    return DepartureHistogram(std::move(buckets));
  } catch (const ConfigError& e) {
    throw MalformedRow(in.file(), 0, e.what());
  }
}

}  // namespace roadsim::sim
