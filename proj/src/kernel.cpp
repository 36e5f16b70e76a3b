#include "fracbern/kernel.hpp"

#include "fracbern/errors.hpp"
#include "fracbern/special.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace fracbern {

namespace {

// Finite window to draw samples from, trimmed away from open endpoints and
// capped for unbounded domains.
std::pair<double, double> sampling_window(const Interval& iv) {
    constexpr double kCap = 20.0;
    double lo = iv.lo, hi = iv.hi;
    if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - kCap : -kCap / 2.0;
    if (!std::isfinite(hi)) hi = lo + kCap;
    double margin = (hi - lo) * 1e-3;
    if (iv.lo_open || !std::isfinite(iv.lo)) lo += margin;
    if (iv.hi_open || !std::isfinite(iv.hi)) hi -= margin;
    if (!(hi > lo)) { lo = iv.lo; hi = iv.hi; }
    return {lo, hi};
}

} // namespace

Kernel::Kernel(std::string id, KernelFamily family, Evaluator fn,
               Interval t_domain, Interval alpha_domain)
    : id_(std::move(id)), family_(family), fn_(std::move(fn)),
      t_dom_(t_domain), alpha_dom_(alpha_domain) {
    if (!fn_)
        throw InvalidParams("kernel '" + id_ + "' has no evaluator");
    validate();
}

double Kernel::operator()(double t, double alpha) const {
    if (!t_dom_.contains(t))
        throw DomainError("kernel '" + id_ + "': t = " + std::to_string(t) + " outside validity domain");
    if (!alpha_dom_.contains(alpha))
        throw DomainError("kernel '" + id_ + "': alpha = " + std::to_string(alpha) + " outside validity domain");
    return fn_(t, alpha);
}

void Kernel::validate() const {
    std::mt19937_64 rng(0x5eedULL);
    const auto [tlo, thi] = sampling_window(t_dom_);
    const auto [alo, ahi] = sampling_window(alpha_dom_);
    std::uniform_real_distribution<double> td(tlo, thi), ad(alo, ahi);

    for (int i = 0; i < 1000; ++i) {
        const double t = td(rng), a = ad(rng);
        const double v = fn_(t, a);
        if (!(v > 0.0) || !std::isfinite(v))
            throw PositivityViolation(id_, t, a, v);
    }

    // Continuity probe: for continuous T the increment over delta is about
    // half the increment over 2*delta; a jump makes them comparable.
    const double delta = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const double t = td(rng), a = ad(rng);
        if (!t_dom_.contains(t + 2.0 * delta)) continue;
        const double v0 = fn_(t, a);
        const double d1 = std::abs(fn_(t + delta, a) - v0);
        const double d2 = std::abs(fn_(t + 2.0 * delta, a) - v0);
        const double floor = 1e-6 * (1.0 + std::abs(v0));
        if (d1 > floor && d1 > 0.9 * d2 + floor)
            throw InvalidParams("kernel '" + id_ + "' fails continuity probe near t = " + std::to_string(t));
    }
}

Kernel builtin_kernel(KernelFamily family, std::optional<Expression> k,
                      std::optional<Interval> t_domain) {
    const auto dom = [&t_domain](Interval fallback) { return t_domain.value_or(fallback); };
    switch (family) {
        case KernelFamily::Conformable:
            // t^(ceil(alpha)-alpha); reduces to t^(1-alpha) on alpha in (0,1].
            return Kernel("conformable", family,
                          [](double t, double a) { return std::pow(t, std::ceil(a) - a); },
                          dom(Interval::positive()), Interval{0.0, 3.0, true, false});
        case KernelFamily::GeneralConformable: {
            if (!k || k->empty())
                throw InvalidParams("general conformable kernel requires a k(t) expression");
            Expression kexpr = *k;
            return Kernel("general:" + kexpr.source(), family,
                          [kexpr](double t, double a) { return std::pow(kexpr.eval(t, a), 1.0 - a); },
                          dom(Interval::positive()), Interval::half_open_alpha());
        }
        case KernelFamily::NonConformable:
            // No stated validity for t <= 0; restricted to (0, inf).
            return Kernel("nonconformable", family,
                          [](double t, double a) { return std::exp(std::pow(t, -a)); },
                          dom(Interval::positive()), Interval::half_open_alpha());
        case KernelFamily::Beta:
            return Kernel("beta", family,
                          [](double t, double a) { return std::pow(t + 1.0 / gamma_fn(a), 1.0 - a); },
                          dom(Interval{0.0, std::numeric_limits<double>::infinity(), false, true}),
                          Interval::half_open_alpha());
        case KernelFamily::ExpShift:
            return Kernel("expshift", family,
                          [](double t, double a) { return std::exp(t - a); },
                          dom(Interval::all()), Interval::half_open_alpha());
        case KernelFamily::ExpScaled:
            return Kernel("expscaled", family,
                          [](double t, double a) { return std::exp((1.0 - a) * t); },
                          dom(Interval::all()), Interval::half_open_alpha());
        case KernelFamily::Custom:
            throw InvalidParams("custom kernels are built with kernel_from_expr");
    }
    throw InvalidParams("unknown kernel family");
}

Kernel kernel_from_expr(const Expression& expr, Interval t_domain, Interval alpha_domain) {
    if (expr.empty())
        throw InvalidParams("custom kernel requires a non-empty expression");
    Expression e = expr;
    return Kernel("custom:" + e.source(), KernelFamily::Custom,
                  [e](double t, double a) { return e.eval(t, a); },
                  t_domain, alpha_domain);
}

Kernel kernel_from_spec(const std::string& spec, std::optional<Interval> t_hint) {
    auto starts_with = [&spec](const char* prefix) {
        return spec.rfind(prefix, 0) == 0;
    };
    if (spec == "conformable") return builtin_kernel(KernelFamily::Conformable);
    if (spec == "nonconformable") return builtin_kernel(KernelFamily::NonConformable);
    if (spec == "beta") return builtin_kernel(KernelFamily::Beta);
    if (spec == "expshift") return builtin_kernel(KernelFamily::ExpShift);
    if (spec == "expscaled") return builtin_kernel(KernelFamily::ExpScaled);
    if (starts_with("general:"))
        return builtin_kernel(KernelFamily::GeneralConformable, Expression::parse(spec.substr(8)),
                              t_hint);
    if (starts_with("custom:"))
        return kernel_from_expr(Expression::parse(spec.substr(7)),
                                t_hint.value_or(Interval::all()));
    throw InvalidParams("unrecognized kernel spec '" + spec + "'");
}

} // namespace fracbern
