#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>

namespace fraudcc {

/// Lock-free log-linear histogram of microsecond latencies, about 3%
/// relative resolution. Safe to record from many threads.
class LatencyHistogram {
 public:
  void record(std::uint64_t micros);
  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }
  /// q in [0, 1]; returns a bucket lower bound in microseconds.
  std::uint64_t percentile(double q) const;
  void reset();

 private:
  static constexpr std::size_t kLinear = 64;
  static constexpr std::size_t kSub = 32;
  static constexpr std::size_t kBuckets = kLinear + 40 * kSub;

  static std::size_t bucket_of(std::uint64_t v);
  static std::uint64_t lower_bound_of(std::size_t bucket);

  std::array<std::atomic<std::uint64_t>, kBuckets> buckets_{};
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace fraudcc
