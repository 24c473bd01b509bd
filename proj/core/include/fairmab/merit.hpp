#pragma once

#include <cmath>
#include <string>

namespace fairmab {

enum class MeritKind { identity, affine, power };

// Merit function f over a closed evaluation domain [lo, hi] within [0, 1].
// Only monotone non-decreasing forms are accepted, and the merit must be
// strictly positive on the domain (0 < gamma1 <= f <= gamma2 with Lipschitz
// constant `lipschitz`). Confidence intervals are clipped into this domain,
// which is what makes positivity hold mechanically at runtime.
struct MeritSpec {
  MeritKind kind = MeritKind::identity;
  double a = 1.0;  // affine: f(x) = a*x + b
  double b = 0.0;
  double p = 1.0;  // power: f(x) = x^p, p >= 1

  double domain_lo = 1e-3;
  double domain_hi = 1.0;

  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double lipschitz = 0.0;

  // Unchecked evaluation; callers clip into the domain first.
  double value(double mu) const {
    switch (kind) {
      case MeritKind::identity: return mu;
      case MeritKind::affine: return a * mu + b;
      case MeritKind::power: return std::pow(mu, p);
    }
    return mu;
  }

  bool in_domain(double mu) const { return mu >= domain_lo && mu <= domain_hi; }
};

// Validated constructors. merit_floor sets the lower edge of the evaluation
// domain [merit_floor, 1]; it must leave gamma1 > 0. Throws
// std::invalid_argument when the form is not usable (gamma1 <= 0, decreasing
// form, bad parameters).
MeritSpec make_identity_merit(double merit_floor = 1e-3);
MeritSpec make_affine_merit(double a, double b, double merit_floor = 1e-3);
MeritSpec make_power_merit(double p, double merit_floor = 1e-3);
MeritSpec make_merit(MeritKind kind, double a, double b, double p,
                     double merit_floor);

// Checked evaluation; throws std::domain_error outside the domain.
double merit_value(const MeritSpec& spec, double mu);

struct MeritBounds {
  double gamma1;
  double gamma2;
  double lipschitz;
};

// Exact analytic extrema and derivative bound over the evaluation domain.
MeritBounds merit_bounds(const MeritSpec& spec);

std::string to_string(MeritKind kind);

}  // namespace fairmab
