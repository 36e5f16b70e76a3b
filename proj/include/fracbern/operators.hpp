#ifndef FRACBERN_OPERATORS_HPP
#define FRACBERN_OPERATORS_HPP

#include "fracbern/grid.hpp"
#include "fracbern/kernel.hpp"
#include "fracbern/quadrature.hpp"

#include <functional>
#include <vector>

namespace fracbern {

using RealFn = std::function<double(double)>;

// Fractional order with its upper integer part.
struct AlphaOrder {
    double alpha;
    int ceil_alpha;

    explicit AlphaOrder(double a);
};

// Derivative by its limit definition: the binomial difference quotient
//   (1/h^m) * sum_{k=0}^{m} (-1)^k C(m,k) f(t - k h T(t,alpha)),  m = ceil(alpha),
// evaluated on a decreasing-h sequence h_j = h0 * 2^-j with Richardson
// extrapolation; stops when two successive extrapolants differ by less than
// 1e-8 * (1 + |value|). Throws NoConvergence (with the best estimate) if the
// sequence does not stabilize within 20 halvings. The stencil direction flips
// automatically when t - m*h*T would leave the kernel's t-domain (one-sided
// limits at interval endpoints).
double gderiv(const RealFn& f, const Kernel& kernel, const AlphaOrder& order, double t);

// Derivative via T(t,alpha)^m * D^m f(t), with D^m f from a central finite
// difference stencil of order >= 4 (step h = max(1e-5, 1e-5*|t|)).
double gderiv_via_classical(const RealFn& f, const Kernel& kernel, const AlphaOrder& order, double t);

// Integral operator: integral from a to t of f(w)/T(w,alpha) dw, by adaptive
// Gauss-Kronrod bisection. Negates when t < a.
double jintegral(const RealFn& f, const Kernel& kernel, double alpha, double a, double t,
                 const QuadratureConfig& cfg = {});

// Prefix values of J at every grid node: value[0] = 0 and value[i+1]-value[i]
// is the adaptive quadrature over [t_i, t_{i+1}]. Requires grid.a() == a.
// err_prefix, when given, receives the accumulated error-estimate per node.
std::vector<double> jintegral_cumulative(const RealFn& f, const Kernel& kernel, double alpha,
                                         double a, const Grid& grid,
                                         const QuadratureConfig& cfg = {},
                                         std::vector<double>* err_prefix = nullptr);
std::vector<double> jintegral_cumulative(const RealFn& f, const Kernel& kernel, double alpha,
                                         double a, const std::vector<double>& nodes,
                                         const QuadratureConfig& cfg = {},
                                         std::vector<double>* err_prefix = nullptr);

// Adjoint of J in L^2[a,b]: (1/T(t,alpha)) * integral from t to b of f(s) ds.
double adjoint_apply(const RealFn& f, const Kernel& kernel, double alpha, double t, double b,
                     const QuadratureConfig& cfg = {});

// Improper integral J_{T,a}(k)(+inf) over doubling horizons.
struct ImproperResult {
    enum class Status { Converged, Divergent, Undetermined };
    Status status = Status::Undetermined;
    double value = 0.0;       // partial or converged value
    double horizon = 0.0;     // last horizon evaluated

    bool converged() const { return status == Status::Converged; }
};

// Requires k >= 0 (sampled; NegativeIntegrand otherwise). Converged when the
// last doubling increment is below tail_tol; Divergent when partial values
// exceed 1e12; Undetermined at horizon_cap.
ImproperResult improper_jintegral(const RealFn& k, const Kernel& kernel, double alpha, double a,
                                  double tail_tol = 1e-10, double horizon_cap = 1e15,
                                  const QuadratureConfig& cfg = {});

// Cumulative prefix of J over a node vector, with two ways to read values at
// off-node points: linear interpolation (O(h^2), cheap) or the prefix plus an
// exact local quadrature from the nearest node to x.
class PrefixIntegral {
public:
    PrefixIntegral(RealFn f, const Kernel& kernel, double alpha,
                   std::vector<double> nodes, const QuadratureConfig& cfg = {});

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

    double at_interpolated(double x) const;
    double at_exact(double x) const;

private:
    std::size_t segment(double x) const;

    RealFn f_;
    const Kernel* kernel_;
    double alpha_;
    QuadratureConfig cfg_;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

} // namespace fracbern

#endif // FRACBERN_OPERATORS_HPP
