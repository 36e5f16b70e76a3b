#include "fracbern/fdm.hpp"

#include "fracbern/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracbern {

double newton_scalar(const std::function<double(double)>& g,
                     const std::function<double(double)>& g_prime,
                     double x0, double tol, int maxit) {
    double x = x0;
    double fx = g(x);
    if (std::abs(fx) <= tol)
        return x;

    int grow_streak = 0;
    bool give_up = false;
    for (int it = 0; it < maxit && !give_up; ++it) {
        const double d = g_prime(x);
        if (std::abs(d) < 1e-14 || !std::isfinite(d))
            break;
        const double x_new = x - fx / d;
        if (!std::isfinite(x_new))
            break;
        const double f_new = g(x_new);
        if (std::abs(f_new) <= tol)
            return x_new;
        grow_streak = std::abs(f_new) > std::abs(fx) ? grow_streak + 1 : 0;
        if (grow_streak >= 3)
            give_up = true;  // diverging; switch to bracketing
        x = x_new;
        fx = f_new;
    }

    // Bracket expansion around the initial guess, then bisection.
    double width = 1.0;
    double lo = x0 - width, hi = x0 + width;
    double flo = g(lo), fhi = g(hi);
    int expansions = 0;
    while (std::signbit(flo) == std::signbit(fhi)) {
        if (++expansions > 60)
            throw RootNotFound("no sign change found while expanding the bracket", x, fx);
        width *= 2.0;
        lo = x0 - width;
        hi = x0 + width;
        flo = g(lo);
        fhi = g(hi);
    }
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = g(mid);
        if (std::abs(fmid) <= tol || 0.5 * (hi - lo) <
                std::numeric_limits<double>::epsilon() * (1.0 + std::abs(mid)))
            return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    const double mid = 0.5 * (lo + hi);
    throw RootNotFound("bisection stalled above tolerance", mid, g(mid));
}

namespace {

// Coefficients of p, q, T at the target node for one implicit step:
//   g(y) = coeff*y + hist + scale*(p*y - q*y^n),  scale = c*h/T(t,alpha).
struct ImplicitStep {
    const BernoulliProblem& prob;
    double t;
    double coeff;
    double hist;
    double scale;
    double p, q;

    ImplicitStep(const BernoulliProblem& pr, double t_, double coeff_, double hist_, double ch)
        : prob(pr), t(t_), coeff(coeff_), hist(hist_) {
        const double T = (*pr.kernel)(t, pr.alpha);
        scale = ch / T;
        p = pr.p.eval(t, pr.alpha);
        q = pr.q.eval(t, pr.alpha);
    }

    double g(double y) const {
        return coeff * y + hist + scale * (p * y - q * prob.pow_n(y));
    }

    // d/dy of y^n: n*y^(n-1), written as n*pow_n(y)/y to reuse the real
    // branch; the y = 0 limit is taken explicitly.
    double dpow(double y) const {
        if (prob.n == 0.0) return 0.0;
        if (y == 0.0) {
            if (prob.n > 1.0) return 0.0;
            if (prob.n == 1.0) return 1.0;
            throw DomainError("y^n not differentiable at y = 0 for n < 1");
        }
        return prob.n * prob.pow_n(y) / y;
    }

    double g_prime(double y) const {
        return coeff + scale * (p - q * dpow(y));
    }

    double solve(double guess, const SchemeConfig& cfg) const {
        try {
            return newton_scalar([this](double y) { return g(y); },
                                 [this](double y) { return g_prime(y); },
                                 guess, cfg.newton_tol, cfg.newton_maxit);
        } catch (const NonRealPower& e) {
            throw RootNotFound(std::string("iterate left the real domain of y^n: ") + e.what(),
                               guess, std::numeric_limits<double>::quiet_NaN());
        }
    }
};

double check_finite(double y, std::size_t node) {
    if (!std::isfinite(y))
        throw NonFinite("finite difference step produced a non-finite value", node);
    return y;
}

// Step primitives on an arbitrary (t, h) pair; the Grid wrappers and the
// substepped startup both route through these.
double euler_forward_at(const BernoulliProblem& prob, double t, double h, double y) {
    const double T = (*prob.kernel)(t, prob.alpha);
    const double pv = prob.p.eval(t, prob.alpha);
    const double qv = prob.q.eval(t, prob.alpha);
    return y + (h / T) * (-pv * y + qv * prob.pow_n(y));
}

double euler_backward_at(const BernoulliProblem& prob, double t, double h, double y_prev,
                         const SchemeConfig& cfg) {
    return ImplicitStep(prob, t, 1.0, -y_prev, h).solve(y_prev, cfg);
}

double midpoint3_at(const BernoulliProblem& prob, double t_center, double h, double y_center,
                    double y_back) {
    const double T = (*prob.kernel)(t_center, prob.alpha);
    const double pv = prob.p.eval(t_center, prob.alpha);
    const double qv = prob.q.eval(t_center, prob.alpha);
    return y_back + (2.0 * h / T) * (-pv * y_center + qv * prob.pow_n(y_center));
}

double backward3_at(const BernoulliProblem& prob, double t, double h, double y1, double y2,
                    const SchemeConfig& cfg) {
    const double ch = cfg.backward3_h_prefactor ? h : 2.0 * h;
    return ImplicitStep(prob, t, 3.0, -4.0 * y1 + y2, ch).solve(y1, cfg);
}

double backward5_at(const BernoulliProblem& prob, double t, double h, double y1, double y2,
                    double y3, double y4, const SchemeConfig& cfg) {
    return ImplicitStep(prob, t, 25.0, -48.0 * y1 + 36.0 * y2 - 16.0 * y3 + 3.0 * y4, 12.0 * h)
        .solve(y1, cfg);
}

} // namespace

double step_euler_forward(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                          double y_i) {
    return check_finite(euler_forward_at(prob, grid.node(i), grid.h(), y_i), i + 1);
}

double step_euler_backward(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                           double y_prev, const SchemeConfig& cfg) {
    return check_finite(euler_backward_at(prob, grid.node(i), grid.h(), y_prev, cfg), i);
}

double step_midpoint3(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_i, double y_im1) {
    return check_finite(midpoint3_at(prob, grid.node(i), grid.h(), y_i, y_im1), i + 1);
}

double step_backward3(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_im1, double y_im2, const SchemeConfig& cfg) {
    return check_finite(backward3_at(prob, grid.node(i), grid.h(), y_im1, y_im2, cfg), i);
}

double step_backward5(const BernoulliProblem& prob, const Grid& grid, std::size_t i,
                      double y_im1, double y_im2, double y_im3, double y_im4,
                      const SchemeConfig& cfg) {
    return check_finite(
        backward5_at(prob, grid.node(i), grid.h(), y_im1, y_im2, y_im3, y_im4, cfg), i);
}

namespace {

// Integrates the startup stretch [t0, t0 + steps*h] on a grid refined by
// `substeps`, using the bootstrap scheme for the first fine value and the mid
// scheme afterwards. Returns the values at the coarse nodes 1..steps.
std::vector<double> startup_values(const BernoulliProblem& prob, double t0, double h,
                                   double beta, std::size_t steps, std::size_t substeps,
                                   const SchemeConfig& cfg) {
    const double hf = h / static_cast<double>(substeps);
    const std::size_t total = steps * substeps;
    std::vector<double> y(total + 1);
    y[0] = beta;
    auto node = [&](std::size_t j) { return t0 + static_cast<double>(j) * hf; };

    // First fine value from the bootstrap scheme.
    y[1] = cfg.bootstrap == Bootstrap::ForwardEuler
               ? euler_forward_at(prob, node(0), hf, y[0])
               : euler_backward_at(prob, node(1), hf, y[0], cfg);
    check_finite(y[1], 1);

    for (std::size_t j = 2; j <= total; ++j) {
        switch (cfg.mid) {
            case MidScheme::Midpoint3:
                y[j] = midpoint3_at(prob, node(j - 1), hf, y[j - 1], y[j - 2]);
                break;
            case MidScheme::Backward3:
                y[j] = backward3_at(prob, node(j), hf, y[j - 1], y[j - 2], cfg);
                break;
            case MidScheme::StayAtBootstrap:
                y[j] = cfg.bootstrap == Bootstrap::ForwardEuler
                           ? euler_forward_at(prob, node(j - 1), hf, y[j - 1])
                           : euler_backward_at(prob, node(j), hf, y[j - 1], cfg);
                break;
        }
        check_finite(y[j], j);
    }

    std::vector<double> out(steps);
    for (std::size_t s = 1; s <= steps; ++s)
        out[s - 1] = y[s * substeps];
    return out;
}

} // namespace

Trajectory solve_fdm(const BernoulliProblem& prob, const Grid& grid, const SchemeConfig& cfg) {
    prob.validate();
    if (!prob.initial)
        throw InvalidParams("solve_fdm requires an initial condition y(a) = beta");
    if (prob.initial->first != grid.a())
        throw InvalidParams("solve_fdm requires the initial condition at the grid start");
    if (!(cfg.newton_tol > 0.0) || cfg.newton_maxit < 1)
        throw InvalidParams("scheme config requires newton_tol > 0 and newton_maxit >= 1");

    const std::size_t count = grid.size();
    const double beta = prob.initial->second;

    Trajectory traj;
    traj.method = "FDM-composite";
    traj.nodes = grid.nodes();
    traj.values.assign(count, 0.0);
    traj.scheme_tags.assign(count, TagInitial);
    traj.values[0] = beta;

    const int boot_tag = cfg.bootstrap == Bootstrap::ForwardEuler ? TagForwardEuler
                                                                  : TagBackwardEuler;
    const int mid_tag = cfg.mid == MidScheme::Midpoint3   ? TagMidpoint3
                        : cfg.mid == MidScheme::Backward3 ? TagBackward3
                                                          : boot_tag;

    std::size_t substeps = cfg.startup_substeps;
    if (substeps == 0)
        substeps = std::min<std::size_t>(grid.n() + 1, 20000);

    const std::size_t startup_len = 3;
    const std::vector<double> start =
        startup_values(prob, grid.a(), grid.h(), beta, startup_len, substeps, cfg);
    for (std::size_t s = 0; s < startup_len; ++s) {
        traj.values[s + 1] = start[s];
        traj.scheme_tags[s + 1] = s == 0 ? boot_tag : mid_tag;
    }

    for (std::size_t i = startup_len + 1; i < count; ++i) {
        try {
            if (cfg.main == MainScheme::Backward5) {
                traj.values[i] = step_backward5(prob, grid, i, traj.values[i - 1],
                                                traj.values[i - 2], traj.values[i - 3],
                                                traj.values[i - 4], cfg);
                traj.scheme_tags[i] = TagBackward5;
            } else {
                switch (cfg.mid) {
                    case MidScheme::Midpoint3:
                        traj.values[i] =
                            step_midpoint3(prob, grid, i - 1, traj.values[i - 1],
                                           traj.values[i - 2]);
                        break;
                    case MidScheme::Backward3:
                        traj.values[i] = step_backward3(prob, grid, i, traj.values[i - 1],
                                                        traj.values[i - 2], cfg);
                        break;
                    case MidScheme::StayAtBootstrap:
                        traj.values[i] =
                            cfg.bootstrap == Bootstrap::ForwardEuler
                                ? step_euler_forward(prob, grid, i - 1, traj.values[i - 1])
                                : step_euler_backward(prob, grid, i, traj.values[i - 1], cfg);
                        break;
                }
                traj.scheme_tags[i] = mid_tag;
            }
        } catch (const RootNotFound& e) {
            throw RootNotFound("node " + std::to_string(i) + ": " + e.what(), e.last_iterate(),
                               e.residual());
        }
    }
    return traj;
}

std::vector<ConvergenceRow> convergence_study(const BernoulliProblem& prob,
                                              const std::function<double(double)>& reference,
                                              const std::vector<std::size_t>& ns,
                                              const SchemeConfig& cfg) {
    if (ns.size() < 3)
        throw InvalidParams("convergence study needs at least 3 grid sizes");
    for (std::size_t i = 0; i + 1 < ns.size(); ++i)
        if (!(ns[i] < ns[i + 1]))
            throw InvalidParams("convergence study grid sizes must be ascending");

    const double y_ref = reference(prob.b);
    std::vector<ConvergenceRow> rows;
    rows.reserve(ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const Grid grid(prob.a, prob.b, ns[k]);
        const Trajectory traj = solve_fdm(prob, grid, cfg);
        ConvergenceRow row;
        row.n = ns[k];
        row.h = grid.h();
        row.endpoint_error = std::abs(traj.values.back() - y_ref);
        row.estimated_order = std::numeric_limits<double>::quiet_NaN();
        if (k > 0) {
            const auto& prev = rows.back();
            row.estimated_order = std::log(prev.endpoint_error / row.endpoint_error) /
                                  std::log(prev.h / row.h);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const BernoulliProblem& prob,
                                              const Trajectory& reference,
                                              const std::vector<std::size_t>& ns,
                                              const SchemeConfig& cfg) {
    const double endpoint = reference.values.back();
    return convergence_study(
        prob, [endpoint](double) { return endpoint; }, ns, cfg);
}

} // namespace fracbern
