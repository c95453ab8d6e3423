#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace bigjumps {

// SplitMix64 finalizer, used to decorrelate (seed, index) pairs.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform on (0, 1]; never returns 0 so inverse-CDF maps stay finite.
inline double to_unit_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// A reproducible random stream. Every batch operation derives one stream per
/// chunk from (seed, chunk index), so results do not depend on worker count.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t index = 0)
      : engine_(stream_key(seed, index)) {}

  double uniform() { return to_unit_open_closed(engine_()); }
  std::uint64_t bits() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Counter-based uniform: one value per (seed, index) without any stream state.
inline double hashed_uniform(std::uint64_t seed, std::uint64_t index) {
  return to_unit_open_closed(stream_key(seed, index));
}

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Splits `total` items into fixed-size chunks, evaluates `fn(chunk, begin, end)`
/// on up to `workers` threads and returns the per-chunk results in chunk order.
/// Chunk boundaries depend only on `total` and `chunk_size`.
template <typename Result>
std::vector<Result> run_chunked(std::size_t total, std::size_t chunk_size, unsigned workers,
                                const std::function<Result(std::size_t, std::size_t, std::size_t)>& fn) {
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
  std::vector<Result> out(chunks);
  auto work = [&](std::size_t first) {
    for (std::size_t c = first; c < chunks; c += std::max(1U, workers)) {
      const std::size_t begin = c * chunk_size;
      out[c] = fn(c, begin, std::min(total, begin + chunk_size));
    }
  };
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace bigjumps
