#include "umlmc/unbiased_sample.hpp"

#include <algorithm>

#include "umlmc/errors.hpp"

namespace umlmc {

Subroutine concatenate(std::vector<Subroutine> parts) {
  if (parts.empty()) throw ConfigError("concatenate needs at least one subroutine");
  return [parts = std::move(parts)](RngStream& s) {
    UnbiasedSample out;
    for (const auto& part : parts) {
      UnbiasedSample piece = part(s);
      out.value.insert(out.value.end(), piece.value.begin(), piece.value.end());
      out.cost += piece.cost;
      out.tau = std::max(out.tau, piece.tau);
    }
    return out;
  };
}

}  // namespace umlmc
