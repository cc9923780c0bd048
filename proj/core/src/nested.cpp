#include "umlmc/nested.hpp"

#include "umlmc/errors.hpp"

namespace umlmc {

NestedEstimate nested_estimate(const NestedSpec& spec, RngStream& s) {
  if (!spec.outer_sampler || !spec.conditional_factory || !spec.outer_map) {
    throw ConfigError("nested specification is incomplete");
  }
  NestedEstimate out;
  out.x = spec.outer_sampler(s);
  try {
    const ConditionalSubroutine inner = spec.conditional_factory(out.x);
    const GFunction g = spec.outer_map(out.x);
    out.inner = mlmc_estimate(spec.inner, inner.subroutine, g, s);
    out.inner.cost += inner.setup_cost;
  } catch (ReplicationError& e) {
    e.set_conditioning(out.x);
    throw;
  }
  out.value = out.inner.w;
  return out;
}

}  // namespace umlmc
