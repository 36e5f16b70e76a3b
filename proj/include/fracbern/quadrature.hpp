#ifndef FRACBERN_QUADRATURE_HPP
#define FRACBERN_QUADRATURE_HPP

#include <functional>

namespace fracbern {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 50;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Adaptive bisection with an embedded Gauss(7)/Kronrod(15) rule pair. All
// sampling nodes are interior, so integrable endpoint singularities are never
// evaluated at the singular point. Throws ToleranceNotMet (carrying the best
// estimate and its error bound) when max_depth cannot absorb the requested
// tolerance; a < b is not required (the orientation handles the sign).
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double a, double b, const QuadratureConfig& cfg);

} // namespace fracbern

#endif // FRACBERN_QUADRATURE_HPP
