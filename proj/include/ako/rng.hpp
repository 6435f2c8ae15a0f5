#ifndef AKO_RNG_HPP
#define AKO_RNG_HPP

#include <cstdint>
#include <vector>

namespace ako {

// Splittable counter-seeded generator: each (master_seed, stream_id) pair
// names an independent xoshiro256** stream, so derivation is stateless and
// independent of scheduling order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform();

  // Uniform integer on [0, bound), bound >= 1. Rejection-free Lemire trick
  // is not needed at these scales; plain rejection keeps it exact.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal();

  // Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<int> permutation(int n);

  // k distinct values from {0, ..., n-1}, sorted ascending.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

inline RngStream derive_stream(std::uint64_t master_seed,
                               std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id);
}

// 64-bit mix used to fold run/cell indices into seeds deterministically.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace ako

#endif  // AKO_RNG_HPP
