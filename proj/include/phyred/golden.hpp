#pragma once

#include <functional>

namespace phyred {

struct ScalarMinimum {
    double x;
    double value;
    int evaluations;
};

/// Golden-section search for the minimum of `f` on [lo, hi], stopped once the
/// bracket is narrower than `tol`. Both endpoints are evaluated as well, so a
/// minimum sitting on the boundary is returned exactly. `f` may return +inf.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tol = 1e-12);

}  // namespace phyred
