#include "phidir/conditions.hpp"

#include <cmath>
#include <stdexcept>

#include "phidir/numerics.hpp"

namespace phidir {

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::I: return "I";
    case ConditionId::II: return "II";
    case ConditionId::C6: return "C6";
    case ConditionId::C10: return "C10";
    case ConditionId::C11_1: return "C11_1";
    case ConditionId::C18_1: return "C18_1";
  }
  throw std::logic_error("bad ConditionId");
}

ConditionId condition_from_string(const std::string& s) {
  if (s == "I") return ConditionId::I;
  if (s == "II") return ConditionId::II;
  if (s == "C6") return ConditionId::C6;
  if (s == "C10") return ConditionId::C10;
  if (s == "C11_1") return ConditionId::C11_1;
  if (s == "C18_1") return ConditionId::C18_1;
  throw std::invalid_argument("unknown condition id '" + s + "'");
}

double PowerMinorant::operator()(double s) const { return c * std::pow(s, m); }

namespace {

bool uses_minorant(ConditionId id) {
  return id == ConditionId::I || id == ConditionId::II || id == ConditionId::C6;
}

// Family / divergence requirements decided analytically from the exponent.
std::string family_violation(ConditionId id, const PowerMinorant& phi) {
  if (!(phi.c > 0.0)) return "minorant coefficient c must be positive";
  switch (id) {
    case ConditionId::I:
      if (phi.m < 1.0)
        return "mild decay needs m >= 1 (nondecreasing phi with divergent "
               "integral of phi/s^2)";
      break;
    case ConditionId::II:
      if (phi.m != 0.0)
        return "strong decay needs m = 0 (nonincreasing phi with divergent "
               "integral of phi/s)";
      break;
    case ConditionId::C6:
      if (!(phi.m > 0.0)) return "C6 needs phi(s) -> infinity, i.e. m > 0";
      break;
    default:
      break;
  }
  return {};
}

}  // namespace

ConditionReport check_condition(const SymbolSpec& spec, ConditionId id,
                                const ConditionParams& params) {
  if (!(params.s0 > 0.0)) throw std::invalid_argument("condition check: s0 must be > 0");
  if (!(params.s_max > params.s0))
    throw std::invalid_argument("condition check: need s_max > s0");
  if (params.grid_points < 2) throw std::invalid_argument("condition check: empty grid");
  if ((id == ConditionId::C6 || id == ConditionId::C10) && !(params.beta > 0.0))
    throw std::invalid_argument("condition check: beta must be > 0");
  if (id == ConditionId::C18_1 && !(params.eps > 0.0))
    throw std::invalid_argument("condition check: eps must be > 0");
  if (params.s0 < spec.s0_valid && id != ConditionId::I && id != ConditionId::II)
    throw std::invalid_argument("condition check: s0 below the symbol's C2 floor");

  ConditionReport rep;
  rep.condition_id = id;
  rep.params = params;
  rep.symbol_label = spec.label;
  rep.grid = num::log_space(params.s0, params.s_max, params.grid_points);
  rep.minorant_nondecreasing = params.minorant.m >= 0.0;

  if (uses_minorant(id)) {
    rep.note = family_violation(id, params.minorant);
    if (!rep.note.empty()) {
      rep.holds = false;
      rep.infimum_value = std::numeric_limits<double>::quiet_NaN();
      rep.witness_s = params.s0;
      return rep;
    }
  }

  const DerivedSymbol d = derive(spec);
  auto lhs = [&](double s) {
    switch (id) {
      case ConditionId::I:
      case ConditionId::II:
        return d.ratio(s) * s * s;
      case ConditionId::C6:
        return (d.b(s) + 1.0 - params.beta * std::max(d.b_prime(s), 0.0) * s) * s * s;
      case ConditionId::C10:
        return (d.b(s) + 1.0 - params.beta * std::abs(d.b_prime(s)) * s) / d.B(s);
      case ConditionId::C11_1:
        return (-d.b_prime(s) * s - (d.b(s) + 1.0)) * s * s;
      case ConditionId::C18_1:
        return (-d.b_prime(s) * s - (1.0 + params.eps) * (d.b(s) + 1.0)) * s * s;
    }
    throw std::logic_error("bad ConditionId");
  };

  double inf = std::numeric_limits<double>::infinity();
  double witness = params.s0;
  for (Eigen::Index i = 0; i < rep.grid.size(); ++i) {
    const double s = rep.grid[i];
    double v = lhs(s);
    if (uses_minorant(id)) {
      // normalized margin, so exact-equality minorants (phi = (1+b^-) s^2 for
      // the power symbols) certify despite rounding at large s
      const double phi = params.minorant(s);
      v = (v - phi) / std::max(1.0, std::abs(phi));
    }
    if (v < inf) {
      inf = v;
      witness = s;
    }
  }
  rep.infimum_value = inf;
  rep.witness_s = witness;

  if (uses_minorant(id)) {
    rep.holds = inf >= -1e-12;
  } else if (params.threshold > 0.0) {
    rep.holds = inf >= params.threshold * (1.0 - 1e-12);
  } else {
    rep.holds = inf > 0.0;
  }
  return rep;
}

}  // namespace phidir
