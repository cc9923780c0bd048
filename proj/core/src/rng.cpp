#include "umlmc/rng.hpp"

#include <cmath>
#include <random>
#include <string>

#include "umlmc/errors.hpp"

namespace umlmc {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

void require_probability(double q, const char* name) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(q));
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() noexcept {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(counter, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  ++block_;
  cursor_ = 0;
}

RngStream::result_type RngStream::operator()() noexcept {
  if (cursor_ == 2) refill();
  return buffer_[cursor_++];
}

double draw_uniform(RngStream& s) noexcept {
  return static_cast<double>(s() >> 11) * 0x1.0p-53;
}

std::uint64_t draw_geometric(RngStream& s, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("geometric success probability must lie in (0, 1), got " + std::to_string(p));
  }
  // 1 - U lies in (0, 1], so the log is finite.
  const double u = 1.0 - draw_uniform(s);
  const double n = std::ceil(std::log(u) / std::log1p(-p));
  if (n < 1.0) return 1;
  if (n >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(n);
}

double draw_normal(RngStream& s, double mean, double sd) {
  if (!(sd >= 0.0)) throw ConfigError("normal standard deviation must be >= 0");
  std::normal_distribution<double> dist(mean, sd);
  return dist(s);
}

bool draw_bernoulli(RngStream& s, double q) {
  require_probability(q, "Bernoulli probability");
  return draw_uniform(s) < q;
}

int draw_sign(RngStream& s) { return (s() >> 63) ? 1 : -1; }

double draw_gamma(RngStream& s, double shape, double scale) {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  std::gamma_distribution<double> dist(shape, scale);
  return dist(s);
}

double draw_beta(RngStream& s, double a, double b) {
  require_positive(a, "beta parameter a");
  require_positive(b, "beta parameter b");
  const double x = draw_gamma(s, a);
  const double y = draw_gamma(s, b);
  return x / (x + y);
}

std::uint64_t draw_binomial(RngStream& s, std::uint64_t n, double q) {
  require_probability(q, "binomial probability");
  std::binomial_distribution<std::uint64_t> dist(n, q);
  return dist(s);
}

std::uint64_t draw_poisson(RngStream& s, double lambda) {
  require_positive(lambda, "Poisson rate");
  std::poisson_distribution<std::uint64_t> dist(lambda);
  return dist(s);
}

}  // namespace umlmc
