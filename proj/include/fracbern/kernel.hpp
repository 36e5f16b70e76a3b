#ifndef FRACBERN_KERNEL_HPP
#define FRACBERN_KERNEL_HPP

#include "fracbern/expr.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace fracbern {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = true;
    bool hi_open = true;

    bool contains(double x) const {
        if (lo_open ? !(x > lo) : !(x >= lo)) return false;
        if (hi_open ? !(x < hi) : !(x <= hi)) return false;
        return true;
    }

    static Interval all() { return {}; }
    static Interval positive() { return {0.0, std::numeric_limits<double>::infinity(), true, true}; }
    static Interval closed(double a, double b) { return {a, b, false, false}; }
    static Interval half_open_alpha() { return {0.0, 1.0, true, false}; }  // (0, 1]
};

enum class KernelFamily {
    Conformable,         // t^(ceil(alpha) - alpha)
    GeneralConformable,  // k(t)^(1 - alpha)
    NonConformable,      // e^(t^(-alpha))
    Beta,                // (t + 1/Gamma(alpha))^(1 - alpha)
    ExpShift,            // e^(t - alpha)
    ExpScaled,           // e^((1 - alpha) t)
    Custom,
};

// The kernel T(t, alpha): a positive continuous function the derivative and
// integral operators are parameterized by. Construction samples positivity
// (1000 points) and runs a finite continuity probe (100 points, delta-halving
// ratio test); violations throw PositivityViolation / InvalidParams.
// Immutable after construction; evaluation is pure.
class Kernel {
public:
    using Evaluator = std::function<double(double t, double alpha)>;

    Kernel(std::string id, KernelFamily family, Evaluator fn,
           Interval t_domain, Interval alpha_domain);

    // Throws DomainError if (t, alpha) is outside the validity domains.
    double operator()(double t, double alpha) const;

    const std::string& id() const { return id_; }
    KernelFamily family() const { return family_; }
    const Interval& t_domain() const { return t_dom_; }
    const Interval& alpha_domain() const { return alpha_dom_; }

private:
    void validate() const;

    std::string id_;
    KernelFamily family_;
    Evaluator fn_;
    Interval t_dom_;
    Interval alpha_dom_;
};

// Catalog constructor. GeneralConformable requires a k(t) expression with
// k > 0 on its domain (InvalidParams otherwise); the other families ignore it.
// t_domain, when given, replaces the family's default validity interval.
Kernel builtin_kernel(KernelFamily family, std::optional<Expression> k = std::nullopt,
                      std::optional<Interval> t_domain = std::nullopt);

// Custom kernel wrapping eval(expr, t, alpha).
Kernel kernel_from_expr(const Expression& expr, Interval t_domain,
                        Interval alpha_domain = Interval::half_open_alpha());

// Config-key form: "conformable" | "general:<expr>" | "nonconformable" |
// "beta" | "expshift" | "expscaled" | "custom:<expr>". t_hint narrows the
// validity domain of general/custom kernels (e.g. to the problem interval);
// catalog kernels keep their own domains.
Kernel kernel_from_spec(const std::string& spec,
                        std::optional<Interval> t_hint = std::nullopt);

} // namespace fracbern

#endif // FRACBERN_KERNEL_HPP
