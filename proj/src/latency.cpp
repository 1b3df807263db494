#include "fraudcc/latency.hpp"

#include <bit>
#include <cmath>

namespace fraudcc {

std::size_t LatencyHistogram::bucket_of(std::uint64_t v) {
  if (v < kLinear) return static_cast<std::size_t>(v);
  // v >= 64: top 6 bits select one of 32 sub-buckets per power of two.
  const int width = std::bit_width(v);  // >= 7
  const int shift = width - 6;
  const std::size_t sub = static_cast<std::size_t>(v >> shift) - kSub;
  const std::size_t idx = kLinear + static_cast<std::size_t>(shift - 1) * kSub + sub;
  return idx < kBuckets ? idx : kBuckets - 1;
}

std::uint64_t LatencyHistogram::lower_bound_of(std::size_t bucket) {
  if (bucket < kLinear) return bucket;
  const std::size_t shift = (bucket - kLinear) / kSub + 1;
  const std::size_t sub = (bucket - kLinear) % kSub + kSub;
  return static_cast<std::uint64_t>(sub) << shift;
}

void LatencyHistogram::record(std::uint64_t micros) {
  buckets_[bucket_of(micros)].fetch_add(1, std::memory_order_relaxed);
  count_.fetch_add(1, std::memory_order_relaxed);
}

std::uint64_t LatencyHistogram::percentile(double q) const {
  std::uint64_t total = 0;
  for (const auto& b : buckets_) total += b.load(std::memory_order_relaxed);
  if (total == 0) return 0;
  const auto rank = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(total)));
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    seen += buckets_[i].load(std::memory_order_relaxed);
    if (seen >= rank && seen > 0) return lower_bound_of(i);
  }
  return lower_bound_of(kBuckets - 1);
}

void LatencyHistogram::reset() {
  for (auto& b : buckets_) b.store(0, std::memory_order_relaxed);
  count_.store(0, std::memory_order_relaxed);
}

}  // namespace fraudcc
