#pragma once

#include <string>
#include <vector>

namespace layerfem::testing {

/// Outcome of one property suite: the worst measured value against its bound.
struct PropertyResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
    std::string detail;
};

/// max |((f - pi f)', chi')| over moment interpolants (k = 2, 3) and all basis functions chi.
PropertyResult moment_orthogonality();

/// Same for P1 nodal interpolation.
PropertyResult p1_nodal_orthogonality();

/// Worst pointwise error when interpolating a random polynomial the space contains.
PropertyResult polynomial_reproduction();

/// Worst ratio |Q - exact| / (rel_tol |exact|) over the analytic integrand set.
PropertyResult quadrature_oracle();

/// Largest deviation of the log-log slopes of |E|_1 and |E|_2 from +1/2 and -1/2.
PropertyResult layer_scaling_slopes();

/// Smallest a((u,w),(u,w)) / (|u|_1^2 + ||w||_0^2) over random pairs and eps.
PropertyResult mixed_coercivity();

std::vector<PropertyResult> all_property_suites();

}  // namespace layerfem::testing
