#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace umlmc {

/// Philox4x32-10 block function (Salmon et al., Random123). Pure function of
/// (counter, key); this is what makes streams independent of scheduling.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. The key is the 64-bit seed, the upper half of
/// the 128-bit counter is the stream id, the lower half counts blocks.
/// Replication r always uses stream id r, so results never depend on which
/// thread ran it.
///
/// Satisfies std::uniform_random_bit_generator so it can drive <random>
/// distributions. A stream is single-owner; move it, do not share it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kDefaultSeed = 20230522ULL;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return 2 * block_ - (2 - cursor_); }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned cursor_ = 2;
};

/// Uniform on [0, 1) with 53 random bits.
double draw_uniform(RngStream& s) noexcept;

/// Geometric on {1, 2, ...}: P(N = n) = (1 - p)^(n - 1) p. Inversion sampling.
/// Throws ConfigError unless 0 < p < 1.
std::uint64_t draw_geometric(RngStream& s, double p);

double draw_normal(RngStream& s, double mean = 0.0, double sd = 1.0);
bool draw_bernoulli(RngStream& s, double q);
/// Uniform on {-1, +1}.
int draw_sign(RngStream& s);
double draw_gamma(RngStream& s, double shape, double scale = 1.0);
double draw_beta(RngStream& s, double a, double b);
std::uint64_t draw_binomial(RngStream& s, std::uint64_t n, double q);
std::uint64_t draw_poisson(RngStream& s, double lambda);

}  // namespace umlmc
