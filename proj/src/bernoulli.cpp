#include "fracbern/bernoulli.hpp"

#include "fracbern/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fracbern {

Rational::Rational(long long n, long long d) {
    if (d == 0)
        throw InvalidParams("rational exponent with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
    if (num == 0) den = 1;
}

Rational Rational::reciprocal() const {
    if (num == 0)
        throw InvalidParams("reciprocal of zero exponent");
    return Rational(den, num);
}

Rational Rational::one_minus(const Rational& r) {
    return Rational(r.den - r.num, r.den);
}

std::optional<Rational> Rational::from_double(double x) {
    if (std::floor(x) == x && std::abs(x) <= 4.5e15)
        return Rational(static_cast<long long>(x), 1);
    return std::nullopt;
}

double real_pow(double base, const Rational& exponent) {
    const double p = exponent.value();
    if (base > 0.0)
        return std::pow(base, p);
    if (base == 0.0) {
        if (exponent.num > 0) return 0.0;
        if (exponent.num == 0) return 1.0;
        throw DomainError("zero base raised to a negative power");
    }
    if (!exponent.odd_den())
        throw NonRealPower("negative base " + std::to_string(base) + " with exponent " +
                           std::to_string(exponent.num) + "/" + std::to_string(exponent.den) +
                           " has no real value");
    const double mag = std::pow(-base, p);
    return (exponent.num % 2 != 0) ? -mag : mag;
}

double real_pow(double base, double p, const std::optional<Rational>& rational) {
    if (base > 0.0)
        return std::pow(base, p);
    if (base == 0.0) {
        if (p > 0.0) return 0.0;
        if (p == 0.0) return 1.0;
        throw DomainError("zero base raised to a negative power");
    }
    if (rational)
        return real_pow(base, *rational);
    throw NonRealPower("negative base " + std::to_string(base) + " with non-rational exponent " +
                       std::to_string(p));
}

void BernoulliProblem::validate() const {
    if (p.empty() || q.empty())
        throw InvalidParams("bernoulli problem requires p and q expressions");
    if (!kernel)
        throw InvalidParams("bernoulli problem requires a kernel");
    if (n == 1.0)
        throw InvalidParams("bernoulli exponent n must differ from 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidParams("bernoulli solvers require alpha in (0, 1]");
    if (!(b > a))
        throw InvalidParams("bernoulli interval requires b > a");
    if (initial.has_value() == constant.has_value())
        throw InvalidParams("exactly one of {initial condition, constant C} must be set");
    if (!kernel->t_domain().contains(a) || !kernel->t_domain().contains(b))
        throw InvalidParams("interval [a, b] leaves the kernel's validity domain");
    if (n_rational && n_rational->value() != n)
        throw InvalidParams("rational form of n disagrees with its decimal value");
}

double BernoulliProblem::pow_n(double y) const {
    if (n == 0.0) return 1.0;
    return real_pow(y, n, n_rational);
}

double BernoulliProblem::rhs(double t, double y) const {
    const double T = (*kernel)(t, alpha);
    return (-p.eval(t, alpha) * y + q.eval(t, alpha) * pow_n(y)) / T;
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::AsymptoticallyStable: return "AsymptoticallyStable";
        case Stability::UniformlyStable: return "UniformlyStable";
        case Stability::Unstable: return "Unstable";
        case Stability::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

RealFn expr_fn(const Expression& e, double alpha) {
    return [e, alpha](double t) { return e.eval(t, alpha); };
}

std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    const double h = (b - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = a + static_cast<double>(i) * h;
    out.back() = b;
    return out;
}

} // namespace

double constant_from_initial(const BernoulliProblem& prob, const QuadratureConfig& cfg) {
    if (!prob.initial)
        throw InvalidParams("constant_from_initial requires an initial condition");
    const auto [t0, y0] = *prob.initial;
    const double one_minus_n = 1.0 - prob.n;
    const std::optional<Rational> omn_rational =
        prob.n_rational ? std::optional<Rational>(Rational::one_minus(*prob.n_rational))
                        : std::nullopt;

    const double y0_pow = real_pow(y0, one_minus_n, omn_rational);
    if (t0 == prob.a)
        return y0_pow;  // both J terms vanish at the base point

    const Kernel& T = *prob.kernel;
    RealFn pf = expr_fn(prob.p, prob.alpha);
    RealFn qf = expr_fn(prob.q, prob.alpha);

    const double lo = std::min(prob.a, t0), hi = std::max(prob.a, t0);
    PrefixIntegral jp(pf, T, prob.alpha, linspace(lo, hi, 129), cfg);
    auto jp_from_a = [&](double w) { return jp.at_exact(w) - jp.at_exact(prob.a); };

    auto integrand = [&](double w) { return qf(w) * std::exp(one_minus_n * jp_from_a(w)); };
    const double jqe = jintegral(integrand, T, prob.alpha, prob.a, t0, cfg);
    return y0_pow * std::exp(one_minus_n * jp_from_a(t0)) - one_minus_n * jqe;
}

Trajectory exact_solution(const BernoulliProblem& prob, const Grid& grid,
                          const QuadratureConfig& cfg) {
    prob.validate();
    if (grid.a() != prob.a)
        throw InvalidParams("solution grid must start at the problem base point");

    const double C = prob.constant ? *prob.constant : constant_from_initial(prob, cfg);
    const double one_minus_n = 1.0 - prob.n;
    std::optional<Rational> inv_rational;
    if (prob.n_rational)
        inv_rational = Rational::one_minus(*prob.n_rational).reciprocal();
    const double inv_exponent = 1.0 / one_minus_n;

    const Kernel& T = *prob.kernel;
    RealFn pf = expr_fn(prob.p, prob.alpha);
    RealFn qf = expr_fn(prob.q, prob.alpha);

    const Grid fine = grid.refined(8);
    PrefixIntegral jp(pf, T, prob.alpha, fine.nodes(), cfg);
    auto outer = [&](double w) { return qf(w) * std::exp(one_minus_n * jp.at_exact(w)); };
    std::vector<double> jqe_err;
    const std::vector<double> jqe =
        jintegral_cumulative(outer, T, prob.alpha, fine.a(), fine.nodes(), cfg, &jqe_err);

    const std::size_t step = fine.size() > grid.size() ? (fine.size() - 1) / (grid.size() - 1) : 1;

    Trajectory traj;
    traj.method = "ClosedForm";
    traj.nodes.reserve(grid.size());
    traj.values.reserve(grid.size());
    traj.error_estimates.reserve(grid.size());

    double prev_z = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t fi = i * step;
        const double jp_i = jp.values()[fi];
        const double z = std::exp(-one_minus_n * jp_i) * (one_minus_n * jqe[fi] + C);

        // A bracket this small relative to its neighborhood is a pole hit up
        // to quadrature rounding, not a usable value.
        const double z_scale = 1.0 + std::max(std::abs(prev_z), std::abs(C));
        if (inv_exponent < 0.0 && std::abs(z) <= 1e-12 * z_scale) {
            if (i == 0)
                throw SingularSolution("solution bracket vanishes at the first grid node",
                                       grid.node(0), grid.node(0));
            traj.blowup = Trajectory::Blowup{i - 1, grid.node(i - 1), grid.node(i)};
            break;
        }
        const bool pole_crossed = i > 0 && inv_exponent < 0.0 && (z < 0.0) != (prev_z < 0.0);

        double y = 0.0;
        bool ok = !pole_crossed && std::isfinite(z);
        if (ok) {
            try {
                y = real_pow(z, inv_exponent, inv_rational);
                ok = std::isfinite(y);
            } catch (const Error&) {
                if (i == 0) throw;  // NonRealPower at the initial node
                ok = false;
            }
        }
        if (!ok) {
            traj.blowup = Trajectory::Blowup{i - 1, grid.node(i - 1), grid.node(i)};
            break;
        }
        traj.nodes.push_back(grid.node(i));
        traj.values.push_back(y);
        traj.error_estimates.push_back(std::abs(one_minus_n) * jqe_err[fi]);
        prev_z = z;
    }
    return traj;
}

Trajectory linear_solution(const Expression& p, const Expression& q, const Kernel& kernel,
                           double alpha, double base_point, double constant, const Grid& grid,
                           const QuadratureConfig& cfg) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidParams("linear solution requires alpha in (0, 1]");
    if (grid.a() != base_point)
        throw InvalidParams("solution grid must start at the base point");

    RealFn pf = expr_fn(p, alpha);
    RealFn qf = expr_fn(q, alpha);

    const Grid fine = grid.refined(8);
    PrefixIntegral jp(pf, kernel, alpha, fine.nodes(), cfg);
    auto outer = [&](double w) { return qf(w) * std::exp(jp.at_exact(w)); };
    const std::vector<double> jqe =
        jintegral_cumulative(outer, kernel, alpha, fine.a(), fine.nodes(), cfg);

    const std::size_t step = fine.size() > grid.size() ? (fine.size() - 1) / (grid.size() - 1) : 1;

    Trajectory traj;
    traj.method = "Linear";
    traj.nodes = grid.nodes();
    traj.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t fi = i * step;
        traj.values[i] = std::exp(-jp.values()[fi]) * (jqe[fi] + constant);
    }
    return traj;
}

Trajectory homogeneous_solution(const Expression& p, const Kernel& kernel, double alpha,
                                double t0, double y0, const Grid& grid,
                                const QuadratureConfig& cfg) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidParams("homogeneous solution requires alpha in (0, 1]");
    if (grid.a() != t0)
        throw InvalidParams("solution grid must start at t0");

    const std::vector<double> jp =
        jintegral_cumulative(expr_fn(p, alpha), kernel, alpha, t0, grid.nodes(), cfg);

    Trajectory traj;
    traj.method = "Linear";
    traj.nodes = grid.nodes();
    traj.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        traj.values[i] = y0 * std::exp(-jp[i]);
    return traj;
}

StabilityVerdict classify_stability(const BernoulliProblem& prob, double horizon, int samples,
                                    const QuadratureConfig& cfg) {
    const double t0 = prob.initial ? prob.initial->first : prob.a;
    if (!(horizon > t0))
        throw InvalidParams("stability horizon must exceed the interval start");
    if (samples < 10)
        throw InvalidParams("stability probing needs at least 10 samples");

    const Kernel& T = *prob.kernel;
    RealFn pf = expr_fn(prob.p, prob.alpha);
    RealFn qf = expr_fn(prob.q, prob.alpha);

    // Geometrically spaced probe times: spans from 1e-3*(horizon-t0) up to
    // the full horizon.
    std::vector<double> probes(samples);
    const double span = horizon - t0;
    for (int j = 0; j < samples; ++j) {
        const double frac = std::exp(std::log(1e-3) *
                                     (1.0 - static_cast<double>(j) / (samples - 1)));
        probes[j] = t0 + span * frac;
    }

    StabilityVerdict v;
    v.horizon = horizon;
    v.p_min = std::numeric_limits<double>::infinity();
    v.q_max = 0.0;
    v.j_min = std::numeric_limits<double>::infinity();
    v.monotone_increasing = true;
    v.monotone_decreasing = true;

    double j_val = 0.0, prev = 0.0, from = t0;
    for (int j = 0; j < samples; ++j) {
        j_val += jintegral(pf, T, prob.alpha, from, probes[j], cfg);
        from = probes[j];
        const double tol = 1e-9 * (1.0 + std::abs(j_val));
        if (j > 0) {
            if (j_val < prev - tol) v.monotone_increasing = false;
            if (j_val > prev + tol) v.monotone_decreasing = false;
        }
        prev = j_val;
        v.j_min = std::min(v.j_min, j_val);
        v.p_min = std::min(v.p_min, pf(probes[j]));
        v.q_max = std::max(v.q_max, std::abs(qf(probes[j])));
    }
    v.j_final = j_val;

    // Denser head sampling for the coefficient bounds.
    for (int i = 0; i <= 50; ++i) {
        const double t = t0 + (std::min(horizon, t0 + 10.0) - t0) * i / 50.0;
        if (t <= t0) continue;
        v.p_min = std::min(v.p_min, pf(t));
        v.q_max = std::max(v.q_max, std::abs(qf(t)));
    }

    constexpr double kGrow = 1e3;
    if (v.monotone_decreasing && v.j_final < -kGrow) {
        v.classification = Stability::Unstable;
    } else if (v.monotone_increasing && v.j_final > kGrow) {
        // Linear case: the limit condition alone decides. Nonlinear case:
        // additionally needs p bounded below by a positive constant and q
        // bounded (the corollary's hypotheses).
        const bool corollary_ok = !prob.nonlinear() || (v.p_min > 0.0 && v.q_max <= 1e6);
        v.classification = corollary_ok ? Stability::AsymptoticallyStable
                                        : Stability::Inconclusive;
    } else if (v.j_min > -kGrow) {
        v.classification = Stability::Stable;
    } else {
        v.classification = Stability::Inconclusive;
    }
    return v;
}

UniformBound uniform_stability_bound(const Expression& k, const Kernel& kernel, double alpha,
                                     double a, double epsilon, double tail_tol,
                                     double horizon_cap, const QuadratureConfig& cfg) {
    if (!(epsilon > 0.0))
        throw InvalidParams("uniform stability bound requires epsilon > 0");
    RealFn kf = [k, alpha](double t) { return k.eval(t, alpha); };
    const ImproperResult res = improper_jintegral(kf, kernel, alpha, a, tail_tol, horizon_cap, cfg);
    UniformBound out;
    if (!res.converged()) {
        out.applicable = false;
        out.n_value = res.value;
        return out;
    }
    out.applicable = true;
    out.n_value = res.value;
    out.delta = epsilon * std::exp(-res.value);
    return out;
}

} // namespace fracbern
