#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

// Philox4x32-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

// Identifies one arrival stream. Distinct keys give independent streams.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t lane = 0;
  std::uint32_t replication = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

// Per-slot arrival counts for one (lane, replication). The count at slot t is
// a pure function of (key, t): slot t uses 32-bit word t % 4 of the Philox
// block with counter (t / 4, lane, replication) under the master-seed key,
// inverted through the distribution's CDF.
class ArrivalStream {
 public:
  ArrivalStream(const StreamKey& key, const ArrivalDistribution& dist);

  std::uint32_t next() {
    if ((slot_ & 3U) == 0) refill();
    const std::uint32_t u = block_[slot_ & 3U];
    ++slot_;
    const std::uint64_t x = u;
    // Counts below 4 are resolved without branching.
    std::uint32_t k = static_cast<std::uint32_t>(x >= head_[0]) + static_cast<std::uint32_t>(x >= head_[1]) +
                      static_cast<std::uint32_t>(x >= head_[2]) + static_cast<std::uint32_t>(x >= head_[3]);
    if (k == 4) [[unlikely]] {
      while (x >= thresholds_[k]) ++k;
    }
    return k;
  }

  // Slot index of the next draw.
  std::uint64_t position() const { return slot_; }
  void seek(std::uint64_t slot);

  const StreamKey& key() const { return key_; }

 private:
  void refill();

  StreamKey key_;
  std::uint64_t slot_ = 0;
  PhiloxCounter block_{};
  // thresholds_[k] = floor(2^32 * P(X <= k)); the last entry is 2^32.
  std::vector<std::uint64_t> thresholds_;
  std::array<std::uint64_t, 4> head_{};
};

ArrivalStream make_stream(const StreamKey& key, const ArrivalDistribution& dist);

inline std::uint32_t next_arrivals(ArrivalStream& s) { return s.next(); }

}  // namespace sqrtgreen
