#include "fairmab/merit.hpp"

#include <stdexcept>

namespace fairmab {

namespace {

MeritSpec finalize(MeritSpec spec, double merit_floor) {
  if (!(merit_floor >= 0.0 && merit_floor < 1.0))
    throw std::invalid_argument("merit_floor must lie in [0, 1)");
  spec.domain_lo = merit_floor;
  spec.domain_hi = 1.0;

  // All supported forms are non-decreasing once parameters are checked, so
  // the extrema sit at the domain edges.
  switch (spec.kind) {
    case MeritKind::identity:
      spec.gamma1 = spec.domain_lo;
      spec.gamma2 = spec.domain_hi;
      spec.lipschitz = 1.0;
      break;
    case MeritKind::affine:
      if (spec.a < 0.0)
        throw std::invalid_argument("affine merit must be non-decreasing (a >= 0)");
      spec.gamma1 = spec.a * spec.domain_lo + spec.b;
      spec.gamma2 = spec.a * spec.domain_hi + spec.b;
      spec.lipschitz = spec.a;
      break;
    case MeritKind::power:
      if (spec.p < 1.0)
        throw std::invalid_argument("power merit requires p >= 1");
      spec.gamma1 = std::pow(spec.domain_lo, spec.p);
      spec.gamma2 = std::pow(spec.domain_hi, spec.p);
      spec.lipschitz = spec.p * std::pow(spec.domain_hi, spec.p - 1.0);
      break;
  }
  if (!(spec.gamma1 > 0.0))
    throw std::invalid_argument(
        "merit violates the minimum-merit assumption: gamma1 = " +
        std::to_string(spec.gamma1) + " on [" + std::to_string(spec.domain_lo) +
        ", " + std::to_string(spec.domain_hi) + "]");
  return spec;
}

}  // namespace

MeritSpec make_identity_merit(double merit_floor) {
  MeritSpec spec;
  spec.kind = MeritKind::identity;
  return finalize(spec, merit_floor);
}

MeritSpec make_affine_merit(double a, double b, double merit_floor) {
  MeritSpec spec;
  spec.kind = MeritKind::affine;
  spec.a = a;
  spec.b = b;
  return finalize(spec, merit_floor);
}

MeritSpec make_power_merit(double p, double merit_floor) {
  MeritSpec spec;
  spec.kind = MeritKind::power;
  spec.p = p;
  return finalize(spec, merit_floor);
}

MeritSpec make_merit(MeritKind kind, double a, double b, double p,
                     double merit_floor) {
  switch (kind) {
    case MeritKind::identity: return make_identity_merit(merit_floor);
    case MeritKind::affine: return make_affine_merit(a, b, merit_floor);
    case MeritKind::power: return make_power_merit(p, merit_floor);
  }
  throw std::invalid_argument("unknown merit kind");
}

double merit_value(const MeritSpec& spec, double mu) {
  if (!spec.in_domain(mu))
    throw std::domain_error("merit_value: mu outside evaluation domain");
  return spec.value(mu);
}

MeritBounds merit_bounds(const MeritSpec& spec) {
  if (!(spec.gamma1 > 0.0))
    throw std::invalid_argument("merit_bounds: gamma1 <= 0");
  return {spec.gamma1, spec.gamma2, spec.lipschitz};
}

std::string to_string(MeritKind kind) {
  switch (kind) {
    case MeritKind::identity: return "identity";
    case MeritKind::affine: return "affine";
    case MeritKind::power: return "power";
  }
  return "?";
}

}  // namespace fairmab
