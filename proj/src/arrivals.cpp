#include "sqrtgreen/arrivals.hpp"

#include <cmath>

namespace sqrtgreen {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;
constexpr std::uint64_t kTwo32 = std::uint64_t{1} << 32;
constexpr std::size_t kMaxSupport = 4096;

std::vector<std::uint64_t> cdf_thresholds(const ArrivalDistribution& d) {
  const long double mean = static_cast<long double>(d.mean.num()) / static_cast<long double>(d.mean.den());
  std::vector<std::uint64_t> out;
  auto push = [&](long double cdf) {
    const long double scaled = std::floor(cdf * static_cast<long double>(kTwo32));
    out.push_back(scaled >= static_cast<long double>(kTwo32) ? kTwo32 : static_cast<std::uint64_t>(scaled));
  };
  if (d.kind == ArrivalKind::Bernoulli) {
    push(1.0L - mean);
  } else {
    long double pmf = std::exp(-mean);
    long double cdf = pmf;
    for (std::size_t k = 0; k < kMaxSupport; ++k) {
      push(cdf);
      if (out.back() == kTwo32) break;
      pmf *= mean / static_cast<long double>(k + 1);
      cdf += pmf;
    }
  }
  if (out.back() != kTwo32) out.push_back(kTwo32);
  return out;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

ArrivalStream::ArrivalStream(const StreamKey& key, const ArrivalDistribution& dist)
    : key_(key), thresholds_(cdf_thresholds(dist)) {
  for (std::size_t k = 0; k < head_.size(); ++k) head_[k] = k < thresholds_.size() ? thresholds_[k] : kTwo32;
}

void ArrivalStream::refill() {
  const std::uint64_t block = slot_ >> 2;
  block_ = philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), key_.lane,
                       key_.replication},
                      {static_cast<std::uint32_t>(key_.master_seed), static_cast<std::uint32_t>(key_.master_seed >> 32)});
}

void ArrivalStream::seek(std::uint64_t slot) {
  slot_ = slot;
  if ((slot_ & 3U) != 0) refill();
}

ArrivalStream make_stream(const StreamKey& key, const ArrivalDistribution& dist) { return ArrivalStream(key, dist); }

}  // namespace sqrtgreen
