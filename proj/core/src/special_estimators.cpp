#include "umlmc/special_estimators.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "umlmc/errors.hpp"

namespace umlmc {

double polynomial_estimator(const std::vector<PolynomialTerm>& terms, unsigned degree,
                            const Subroutine& subroutine, RngStream& s) {
  std::size_t dim = 0;
  for (const auto& term : terms) {
    const unsigned total = std::accumulate(term.exponents.begin(), term.exponents.end(), 0u);
    if (total > degree) {
      throw ConfigError("polynomial term of degree " + std::to_string(total) +
                        " exceeds the declared degree " + std::to_string(degree));
    }
    if (!std::isfinite(term.coefficient)) throw ConfigError("polynomial coefficient is not finite");
    if (dim == 0) dim = term.exponents.size();
    if (term.exponents.size() != dim) throw ConfigError("polynomial terms differ in dimension");
  }

  std::vector<std::vector<double>> samples;
  samples.reserve(degree);
  for (unsigned i = 0; i < degree; ++i) {
    UnbiasedSample h = subroutine(s);
    if (dim != 0 && h.value.size() != dim) {
      throw ConfigError("subroutine dimension " + std::to_string(h.value.size()) +
                        " does not match the polynomial's " + std::to_string(dim));
    }
    samples.push_back(std::move(h.value));
  }

  double total = 0.0;
  for (const auto& term : terms) {
    double product = term.coefficient;
    std::size_t next = 0;
    for (std::size_t b = 0; b < term.exponents.size(); ++b) {
      for (unsigned rep = 0; rep < term.exponents[b]; ++rep) product *= samples[next++][b];
    }
    total += product;
  }
  return total;
}

LevelLaw poisson_level_law(double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("Poisson level law needs lambda > 0");
  return {[lambda](RngStream& s) { return draw_poisson(s, lambda); },
          [lambda](std::uint64_t n) {
            return std::exp(-lambda + static_cast<double>(n) * std::log(lambda) -
                            std::lgamma(static_cast<double>(n) + 1.0));
          }};
}

LevelLaw geometric_level_law(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("geometric level law needs 0 < r < 1");
  return {[r](RngStream& s) { return draw_geometric(s, r) - 1; },
          [r](std::uint64_t n) { return r * std::pow(1.0 - r, static_cast<double>(n)); }};
}

LevelLaw point_mass_level_law(std::uint64_t level) {
  return {[level](RngStream&) { return level; },
          [level](std::uint64_t n) { return n == level ? 1.0 : 0.0; }};
}

double power_series_estimator(const std::function<double(std::uint64_t)>& coefficient, double center,
                              const LevelLaw& level_law, const Subroutine& subroutine, RngStream& s) {
  const std::uint64_t n = level_law.draw(s);
  const double a_n = coefficient(n);
  if (a_n == 0.0) return 0.0;  // the samples would be multiplied by zero
  const double q_n = level_law.pmf(n);
  if (!(q_n > 0.0)) {
    throw ConfigError("level law puts zero mass on level " + std::to_string(n) +
                      " where the coefficient is non-zero");
  }
  double product = a_n / q_n;
  for (std::uint64_t j = 0; j < n; ++j) {
    const UnbiasedSample h = subroutine(s);
    if (h.value.size() != 1) throw ConfigError("power-series estimator needs a scalar subroutine");
    product *= h.value[0] - center;
  }
  return product;
}

}  // namespace umlmc
