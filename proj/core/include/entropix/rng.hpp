#pragma once

#include <cstdint>
#include <initializer_list>

namespace entropix {

// Counter-based random stream. Draw i of (seed, stream_id) is a pure function
// of the triple, so results are identical across runs, platforms and threads.
// The stream is a value: copying it forks the counter.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  // Index of the next draw.
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double next_uniform();

  // Stateless access to draw `index` of a stream.
  static std::uint64_t draw(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index);

  // A fresh stream (counter 0) whose id is mixed from this stream's id and
  // `keys`. Used to give every (purpose, position, step) its own sequence.
  RngStream derive(std::initializer_list<std::uint64_t> keys) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Maps a 64-bit word to [0, 1) using the top 53 bits.
double to_unit_interval(std::uint64_t bits);

}  // namespace entropix
