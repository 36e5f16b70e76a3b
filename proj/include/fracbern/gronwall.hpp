#ifndef FRACBERN_GRONWALL_HPP
#define FRACBERN_GRONWALL_HPP

#include "fracbern/grid.hpp"
#include "fracbern/kernel.hpp"
#include "fracbern/operators.hpp"
#include "fracbern/quadrature.hpp"

#include <cstddef>
#include <vector>

namespace fracbern {

// Data for the Gronwall-type bounds: continuous r, c, d, k on [a, b] with
// d, k >= 0 (sampled at construction) and alpha in (0, 1].
struct GronwallData {
    RealFn r;
    RealFn c;
    RealFn d;
    RealFn k;
    const Kernel* kernel = nullptr;
    double alpha = 1.0;
    double a = 0.0;
    double b = 1.0;

    // Throws InvalidParams when a sampled d or k value is negative or
    // alpha is outside (0, 1].
    void validate() const;
};

// Upper bound B(t_i) = c + d * J(c k e^{-J(dk)}) * e^{J(dk)} on the grid
// nodes. The inner prefix J(dk) is linearly interpolated between grid nodes
// inside the outer quadrature (interpolation error O(h^2)).
std::vector<double> gronwall_bound(const GronwallData& data, const Grid& grid,
                                   const QuadratureConfig& cfg = {});

// Same formula; it is a lower bound when the hypothesis inequality is
// reversed.
std::vector<double> gronwall_lower_bound(const GronwallData& data, const Grid& grid,
                                         const QuadratureConfig& cfg = {});

// Simplified bound c + d * J(ck) * e^{J(dk)}; additionally requires c >= 0
// (NegativeC otherwise).
std::vector<double> gronwall_bound_simplified(const GronwallData& data, const Grid& grid,
                                              const QuadratureConfig& cfg = {});

struct BoundReport {
    bool ok = true;
    double worst_violation = 0.0;  // max over i of values[i] - bound[i]
    std::size_t index = 0;
};

// ok iff values[i] <= bound[i] + slack for all i. Throws LengthMismatch.
BoundReport verify_bound(const std::vector<double>& values, const std::vector<double>& bound,
                         double slack = 1e-6);

} // namespace fracbern

#endif // FRACBERN_GRONWALL_HPP
