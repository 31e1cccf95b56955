#include "entropix/rng.hpp"

namespace entropix {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(seed ^ mix64(stream_id + kGolden));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(stream_key(seed, stream_id)) {}

std::uint64_t RngStream::draw(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) {
  return mix64(stream_key(seed, stream_id) + (index + 1) * kGolden);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t value = mix64(key_ + (counter_ + 1) * kGolden);
  ++counter_;
  return value;
}

double RngStream::next_uniform() { return to_unit_interval(next_u64()); }

RngStream RngStream::derive(std::initializer_list<std::uint64_t> keys) const {
  std::uint64_t id = mix64(stream_id_ ^ 0xD6E8FEB86659FD93ULL);
  for (std::uint64_t k : keys) {
    id = mix64(id ^ (k + kGolden));
  }
  return RngStream(seed_, id);
}

}  // namespace entropix
