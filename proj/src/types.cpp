// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "rtn/types.hpp"

namespace rtn {

bool ComplexValue::finite() const { return std::isfinite(re) && std::isfinite(im); }

void TelegraphSource::validate() const {
  if (!(std::isfinite(delta) && delta >= 0)) throw DomainError("delta must be finite and >= 0");
  if (!(std::isfinite(tau_plus) && tau_plus > 0)) throw DomainError("tau_plus must be > 0");
  if (!(std::isfinite(tau_minus) && tau_minus > 0)) throw DomainError("tau_minus must be > 0");
  if (!(p_plus >= 0 && p_plus <= 1)) throw DomainError("p_plus must lie in [0, 1]");
}

void EvaluationPoint::validate() const {
  if (!std::isfinite(m)) throw DomainError("m must be finite");
  if (!(std::isfinite(t) && t >= 0)) throw DomainError("t must be finite and >= 0");
}

std::string to_string(StartPolicy p) {
  switch (p) {
    case StartPolicy::positive: return "positive";
    case StartPolicy::negative: return "negative";
    case StartPolicy::mixed: return "mixed";
  }
  return "mixed";
}

StartPolicy parse_start_policy(const std::string& name) {
  if (name == "positive") return StartPolicy::positive;
  if (name == "negative") return StartPolicy::negative;
  if (name == "mixed") return StartPolicy::mixed;
  throw DomainError("unknown start policy '" + name + "' (expected positive|negative|mixed)");
}

}  // namespace rtn
