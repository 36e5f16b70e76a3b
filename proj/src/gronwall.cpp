#include "fracbern/gronwall.hpp"

#include "fracbern/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace fracbern {

void GronwallData::validate() const {
    if (!r || !c || !d || !k)
        throw InvalidParams("gronwall data requires all of r, c, d, k");
    if (!kernel)
        throw InvalidParams("gronwall data requires a kernel");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidParams("gronwall bounds require alpha in (0, 1]");
    if (!(b > a))
        throw InvalidParams("gronwall interval requires b > a");
    std::mt19937_64 rng(0xabcdULL);
    std::uniform_real_distribution<double> dist(a, b);
    for (int i = 0; i < 200; ++i) {
        const double t = dist(rng);
        if (d(t) < 0.0)
            throw InvalidParams("gronwall data requires d >= 0 on [a,b]; d(" +
                                std::to_string(t) + ") < 0");
        if (k(t) < 0.0)
            throw InvalidParams("gronwall data requires k >= 0 on [a,b]; k(" +
                                std::to_string(t) + ") < 0");
    }
}

namespace {

std::vector<double> bound_impl(const GronwallData& data, const Grid& grid,
                               const QuadratureConfig& cfg, bool simplified) {
    data.validate();
    if (simplified) {
        std::mt19937_64 rng(0xdcbaULL);
        std::uniform_real_distribution<double> dist(data.a, data.b);
        for (int i = 0; i < 200; ++i) {
            const double t = dist(rng);
            if (data.c(t) < 0.0)
                throw NegativeC("simplified gronwall bound requires c >= 0; c(" +
                                std::to_string(t) + ") < 0");
        }
    }

    const Kernel& T = *data.kernel;
    auto dk = [&data](double t) { return data.d(t) * data.k(t); };
    PrefixIntegral jdk(dk, T, data.alpha, grid.nodes(), cfg);

    // Outer integrand: c*k (simplified) or c*k*e^{-J(dk)} with J(dk) read by
    // linear interpolation of the prefix.
    RealFn inner;
    if (simplified) {
        inner = [&data](double t) { return data.c(t) * data.k(t); };
    } else {
        inner = [&data, &jdk](double t) {
            return data.c(t) * data.k(t) * std::exp(-jdk.at_interpolated(t));
        };
    }
    const std::vector<double> jinner =
        jintegral_cumulative(inner, T, data.alpha, grid.a(), grid.nodes(), cfg);

    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.node(i);
        out[i] = data.c(t) + data.d(t) * jinner[i] * std::exp(jdk.values()[i]);
    }
    return out;
}

} // namespace

std::vector<double> gronwall_bound(const GronwallData& data, const Grid& grid,
                                   const QuadratureConfig& cfg) {
    return bound_impl(data, grid, cfg, false);
}

std::vector<double> gronwall_lower_bound(const GronwallData& data, const Grid& grid,
                                         const QuadratureConfig& cfg) {
    return bound_impl(data, grid, cfg, false);
}

std::vector<double> gronwall_bound_simplified(const GronwallData& data, const Grid& grid,
                                              const QuadratureConfig& cfg) {
    return bound_impl(data, grid, cfg, true);
}

BoundReport verify_bound(const std::vector<double>& values, const std::vector<double>& bound,
                         double slack) {
    if (values.size() != bound.size())
        throw LengthMismatch("verify_bound: values has " + std::to_string(values.size()) +
                             " entries, bound has " + std::to_string(bound.size()));
    BoundReport rep;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i] - bound[i];
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.index = i;
        }
        if (values[i] > bound[i] + slack)
            rep.ok = false;
    }
    if (values.empty()) rep.worst_violation = 0.0;
    return rep;
}

} // namespace fracbern
