#pragma once

#include <string>
#include <vector>

#include "heatlab/common.hpp"

namespace heatlab {

// One certified inequality. paper_eq carries the constraint in plain text;
// closed_form_bound is the analytic bound used as initial guess (NaN when
// not applicable) and verified_bound the grid-verified counterpart.
// max_violation is a relative residual, <= 0 when the constraint holds.
struct ConstraintCheck {
  std::string constraint;
  std::string paper_eq;
  double closed_form_bound = kNaN;
  double verified_bound = kNaN;
  double max_violation = 0.0;
  bool pass = true;
};

struct AdmissibilityCertificate {
  std::vector<ConstraintCheck> checks;
  // min over the defect grid of defect / local barrier value.
  double min_relative_defect = kNaN;
  // False when the decay rate cannot meet the integrability threshold and
  // the mass normalization is therefore absent.
  bool normalizable = true;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

}  // namespace heatlab
