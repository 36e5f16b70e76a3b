#include "fracbern/operators.hpp"

#include "fracbern/errors.hpp"
#include "fracbern/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fracbern {

AlphaOrder::AlphaOrder(double a) : alpha(a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidParams("order alpha must be positive and finite");
    ceil_alpha = static_cast<int>(std::ceil(a));
}

namespace {

double binomial_quotient(const RealFn& f, double t, double shift_unit, double h, int m) {
    // sum_{k=0}^{m} (-1)^k C(m,k) f(t - k h T) / h^m with T frozen at t.
    double acc = 0.0;
    double sign = 1.0;
    for (int k = 0; k <= m; ++k) {
        acc += sign * binomial(m, k) * f(t - static_cast<double>(k) * h * shift_unit);
        sign = -sign;
    }
    return acc / std::pow(h, m);
}

} // namespace

double gderiv(const RealFn& f, const Kernel& kernel, const AlphaOrder& order, double t) {
    const double T = kernel(t, order.alpha);
    const int m = order.ceil_alpha;

    // Scale-free initial step: the widest stencil point sits about
    // 1e-2*(1+|t|) away from t regardless of the magnitude of T.
    double h0 = 1e-2 * (1.0 + std::abs(t)) / (static_cast<double>(m) * std::max(T, 1e-300));

    // One-sided limits at domain endpoints: switch to h -> 0^- when
    // t - m*h*T would leave the kernel's validity interval. With h = -g the
    // quotient picks up a (-1)^m factor.
    const Interval& dom = kernel.t_domain();
    double dir = 1.0;
    if (!dom.contains(t - m * h0 * T)) {
        dir = -1.0;
        while (!dom.contains(t + m * h0 * T) && h0 > 1e-300)
            h0 *= 0.5;
    }
    const double parity = (dir < 0.0 && m % 2 == 1) ? -1.0 : 1.0;

    constexpr int kMaxHalvings = 20;
    constexpr double kTol = 1e-8;
    double tableau[kMaxHalvings + 1][kMaxHalvings + 1];
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_diff = std::numeric_limits<double>::infinity();
    double prev_diag = std::numeric_limits<double>::quiet_NaN();

    double h = h0;
    for (int j = 0; j <= kMaxHalvings; ++j, h *= 0.5) {
        tableau[j][0] = parity * binomial_quotient(f, t, dir * T, h, m);
        double pow2 = 2.0;  // 2^k: the quotient's error expands in powers h, h^2, ...
        for (int k = 1; k <= j; ++k) {
            tableau[j][k] = tableau[j][k - 1] +
                            (tableau[j][k - 1] - tableau[j - 1][k - 1]) / (pow2 - 1.0);
            pow2 *= 2.0;
        }
        const double diag = tableau[j][j];
        if (j > 0) {
            const double diff = std::abs(diag - prev_diag);
            if (diff < best_diff) { best_diff = diff; best = diag; }
            if (diff < kTol * (1.0 + std::abs(diag)))
                return diag;
        }
        prev_diag = diag;
    }
    throw NoConvergence("derivative limit did not stabilize within 20 step halvings", best);
}

namespace {

// Fornberg weights for the m-th derivative at x0 = 0 on the stencil points
// `x` (Fornberg's recurrence). Returns one weight per stencil point.
std::vector<double> fornberg_weights(const std::vector<double>& x, int m) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(m + 1, 0.0));
    d[0][0] = 1.0;
    double c1 = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        double c2 = 1.0;
        const int mn = static_cast<int>(std::min<std::size_t>(i, static_cast<std::size_t>(m)));
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                // New row i from the old row i-1, before row i-1 is updated.
                for (int k = mn; k >= 1; --k)
                    d[i][k] = c1 * (k * d[i - 1][k - 1] - x[i - 1] * d[i - 1][k]) / c2;
                d[i][0] = -c1 * x[i - 1] * d[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                d[j][k] = (x[i] * d[j][k] - k * d[j][k - 1]) / c3;
            d[j][0] = x[i] * d[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = d[i][m];
    return w;
}

} // namespace

double gderiv_via_classical(const RealFn& f, const Kernel& kernel, const AlphaOrder& order, double t) {
    const int m = order.ceil_alpha;
    const double h = std::max(1e-5, 1e-5 * std::abs(t));

    // Smallest odd stencil width with at least 4th-order accuracy.
    int width = m + 4;
    if (width % 2 == 0) ++width;
    const int half = width / 2;

    std::vector<double> offsets(width);
    for (int i = 0; i < width; ++i)
        offsets[i] = static_cast<double>(i - half);
    const std::vector<double> w = fornberg_weights(offsets, m);

    double acc = 0.0;
    for (int i = 0; i < width; ++i)
        acc += w[i] * f(t + offsets[i] * h);
    const double dm = acc / std::pow(h, m);
    return std::pow(kernel(t, order.alpha), m) * dm;
}

double jintegral(const RealFn& f, const Kernel& kernel, double alpha, double a, double t,
                 const QuadratureConfig& cfg) {
    if (a == t) return 0.0;
    auto integrand = [&](double w) { return f(w) / kernel(w, alpha); };
    return adaptive_quadrature(integrand, a, t, cfg).value;
}

std::vector<double> jintegral_cumulative(const RealFn& f, const Kernel& kernel, double alpha,
                                         double a, const std::vector<double>& nodes,
                                         const QuadratureConfig& cfg,
                                         std::vector<double>* err_prefix) {
    if (nodes.empty())
        throw InvalidParams("cumulative integral needs at least one node");
    if (nodes.front() != a)
        throw InvalidParams("cumulative integral grid must start at the base point");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw InvalidParams("cumulative integral grid must be strictly ascending");

    auto integrand = [&](double w) { return f(w) / kernel(w, alpha); };
    std::vector<double> out(nodes.size(), 0.0);
    if (err_prefix)
        err_prefix->assign(nodes.size(), 0.0);
    double sum = 0.0, comp = 0.0;  // Kahan-compensated running prefix
    double err_sum = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const QuadratureResult piece = adaptive_quadrature(integrand, nodes[i], nodes[i + 1], cfg);
        const double y = piece.value - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        out[i + 1] = sum;
        err_sum += piece.error_estimate;
        if (err_prefix)
            (*err_prefix)[i + 1] = err_sum;
    }
    return out;
}

std::vector<double> jintegral_cumulative(const RealFn& f, const Kernel& kernel, double alpha,
                                         double a, const Grid& grid, const QuadratureConfig& cfg,
                                         std::vector<double>* err_prefix) {
    return jintegral_cumulative(f, kernel, alpha, a, grid.nodes(), cfg, err_prefix);
}

double adjoint_apply(const RealFn& f, const Kernel& kernel, double alpha, double t, double b,
                     const QuadratureConfig& cfg) {
    if (!(t <= b))
        throw InvalidParams("adjoint requires t <= b");
    if (t == b) return 0.0;
    return adaptive_quadrature(f, t, b, cfg).value / kernel(t, alpha);
}

ImproperResult improper_jintegral(const RealFn& k, const Kernel& kernel, double alpha, double a,
                                  double tail_tol, double horizon_cap, const QuadratureConfig& cfg) {
    // Sampled nonnegativity of k on the head of the ray.
    {
        std::mt19937_64 rng(0xfeedULL);
        std::uniform_real_distribution<double> d(a, a + 100.0);
        for (int i = 0; i < 100; ++i) {
            const double t = d(rng);
            const double v = k(t);
            if (v < 0.0)
                throw NegativeIntegrand("k(" + std::to_string(t) + ") = " + std::to_string(v) + " < 0");
        }
    }

    constexpr double kDivergenceCap = 1e12;
    double span = 1.0;
    double horizon = a + span;
    double total = jintegral(k, kernel, alpha, a, horizon, cfg);
    while (true) {
        if (std::abs(total) > kDivergenceCap)
            return {ImproperResult::Status::Divergent, total, horizon};
        const double next = a + 2.0 * span;
        if (next > horizon_cap)
            return {ImproperResult::Status::Undetermined, total, horizon};
        const double piece = jintegral(k, kernel, alpha, horizon, next, cfg);
        total += piece;
        span *= 2.0;
        horizon = next;
        if (std::abs(piece) < tail_tol)
            return {ImproperResult::Status::Converged, total, horizon};
    }
}

PrefixIntegral::PrefixIntegral(RealFn f, const Kernel& kernel, double alpha,
                               std::vector<double> nodes, const QuadratureConfig& cfg)
    : f_(std::move(f)), kernel_(&kernel), alpha_(alpha), cfg_(cfg), nodes_(std::move(nodes)) {
    values_ = jintegral_cumulative(f_, *kernel_, alpha_, nodes_.front(), nodes_, cfg_);
}

std::size_t PrefixIntegral::segment(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(i, nodes_.size() - 2);
}

double PrefixIntegral::at_interpolated(double x) const {
    const std::size_t i = segment(x);
    const double t0 = nodes_[i], t1 = nodes_[i + 1];
    const double w = (x - t0) / (t1 - t0);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double PrefixIntegral::at_exact(double x) const {
    const std::size_t i = segment(x);
    if (x == nodes_[i]) return values_[i];
    auto integrand = [this](double w) { return f_(w) / (*kernel_)(w, alpha_); };
    return values_[i] + adaptive_quadrature(integrand, nodes_[i], x, cfg_).value;
}

} // namespace fracbern
