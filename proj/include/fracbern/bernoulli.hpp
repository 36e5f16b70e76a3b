#ifndef FRACBERN_BERNOULLI_HPP
#define FRACBERN_BERNOULLI_HPP

#include "fracbern/expr.hpp"
#include "fracbern/grid.hpp"
#include "fracbern/kernel.hpp"
#include "fracbern/operators.hpp"
#include "fracbern/quadrature.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fracbern {

// Exponent n as a reduced fraction num/den with den > 0. Carrying the
// fraction lets y^n and bracket^(1/(1-n)) use the real odd-denominator branch
// for negative bases; a plain double n only supports positive bases (and
// integers).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool odd_den() const { return den % 2 != 0; }

    Rational reciprocal() const;
    static Rational one_minus(const Rational& r);  // 1 - r
    // Recognizes integral doubles; returns nullopt for non-integral values.
    static std::optional<Rational> from_double(double x);
};

// base^(num/den) on the real branch: negative bases are allowed when den is
// odd (sign(base) * |base|^(num/den)); otherwise NonRealPower. base == 0 with
// a negative exponent is a DomainError.
double real_pow(double base, const Rational& exponent);

// base^p for double p; negative bases fall back to `rational` when provided.
double real_pow(double base, double p, const std::optional<Rational>& rational);

// The generalized Bernoulli problem G_T^alpha y + p(t) y = q(t) y^n on
// [a, b], n != 1, with either an initial condition or an integration
// constant C for the closed-form solution.
struct BernoulliProblem {
    Expression p;
    Expression q;
    double n = 2.0;
    std::optional<Rational> n_rational;  // set when n was given as a fraction or integer
    double alpha = 1.0;
    const Kernel* kernel = nullptr;
    double a = 0.0;  // interval start, also the base point of J
    double b = 1.0;
    std::optional<std::pair<double, double>> initial;  // (t0, y0)
    std::optional<double> constant;                    // C

    // Checks the type invariants: exactly one of initial/constant, n != 1,
    // alpha in (0,1], interval inside the kernel's t-domain.
    void validate() const;

    bool nonlinear() const { return n != 0.0 && n != 1.0; }
    double rhs(double t, double y) const;  // (-p y + q y^n) / T
    double pow_n(double y) const;          // y^n on the real branch
};

struct Trajectory {
    std::vector<double> nodes;
    std::vector<double> values;
    std::string method;
    std::vector<double> error_estimates;  // per-node, empty when not tracked
    std::vector<int> scheme_tags;         // FDM: which scheme produced each node

    // Set when the solution bracket changed sign inside the interval and the
    // trajectory was truncated at the last safe node.
    struct Blowup {
        std::size_t last_safe_index;
        double t_before;
        double t_after;
    };
    std::optional<Blowup> blowup;

    double endpoint() const { return values.back(); }
};

enum class Stability {
    Stable,
    AsymptoticallyStable,
    UniformlyStable,
    Unstable,
    Inconclusive,
};

const char* to_string(Stability s);

struct StabilityVerdict {
    Stability classification = Stability::Inconclusive;
    // Numeric probes backing the verdict (evidence, not proof).
    double j_final = 0.0;         // J(p) at the last probe
    double j_min = 0.0;           // min over probes (liminf estimate)
    double horizon = 0.0;
    double p_min = 0.0;           // min sampled p(t)
    double q_max = 0.0;           // max sampled |q(t)|
    bool monotone_increasing = false;
    bool monotone_decreasing = false;
};

struct UniformBound {
    bool applicable = false;
    double n_value = 0.0;  // N = integral of k/T over [a, inf)
    double delta = 0.0;    // epsilon * e^{-N}
};

// C making y(t0) = y0 in the closed-form solution.
double constant_from_initial(const BernoulliProblem& prob, const QuadratureConfig& cfg = {});

// Closed-form solution on the grid nodes,
//   y = [ e^{-(1-n)J(p)} ( (1-n) J(q e^{(1-n)J(p)}) + C ) ]^{1/(1-n)},
// with the inner prefix J(p) on a refinement of the grid and exact local
// quadrature for the outer integrand. Truncates and flags instead of
// emitting Inf when the bracket crosses zero (SingularSolution only when not
// even the first node is safe).
Trajectory exact_solution(const BernoulliProblem& prob, const Grid& grid,
                          const QuadratureConfig& cfg = {});

// Linear equation G_T^alpha y + p y = q: y = e^{-J(p)} (J(q e^{J(p)}) + C).
Trajectory linear_solution(const Expression& p, const Expression& q, const Kernel& kernel,
                           double alpha, double base_point, double constant, const Grid& grid,
                           const QuadratureConfig& cfg = {});

// Homogeneous equation: y = y0 * e^{-J_{T,t0}(p)}. Grid must start at t0.
Trajectory homogeneous_solution(const Expression& p, const Kernel& kernel, double alpha,
                                double t0, double y0, const Grid& grid,
                                const QuadratureConfig& cfg = {});

// Evidence-based classification of the trivial solution from J(p) probes at
// geometrically spaced times up to the horizon.
StabilityVerdict classify_stability(const BernoulliProblem& prob, double horizon = 1e6,
                                    int samples = 64, const QuadratureConfig& cfg = {});

// delta(epsilon) = epsilon * e^{-N} with N the improper integral of k/T;
// not applicable when that integral diverges or is undetermined.
UniformBound uniform_stability_bound(const Expression& k, const Kernel& kernel, double alpha,
                                     double a, double epsilon, double tail_tol = 1e-10,
                                     double horizon_cap = 1e15, const QuadratureConfig& cfg = {});

} // namespace fracbern

#endif // FRACBERN_BERNOULLI_HPP
