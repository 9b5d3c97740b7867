#pragma once

#include <ostream>

#include "docksim/mlp.hpp"

namespace docksim {

// Property suites shared by the `check` CLI command and the acceptance
// tests. Each returns true on pass and prints one line per property.

// h invariance, predict equivariance, and the phi shift over random
// rotations of random relative states.
bool check_equivariance(std::ostream& os, int cases = 100, double tol = 1e-9);

// Closed-form per-axis CARE gains against the Kleinman-Newton oracle,
// Riccati residual, and closed-loop eigenvalues.
bool check_care(std::ostream& os, double tol = 1e-9);

// Analytic network gradients against central finite differences.
bool check_gradients(std::ostream& os, int draws = 10, double tol = 1e-4);

bool run_property_checks(std::ostream& os);

} // namespace docksim
