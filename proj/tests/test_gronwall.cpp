#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracbern/bernoulli.hpp"
#include "fracbern/errors.hpp"
#include "fracbern/gronwall.hpp"

#include <cmath>
#include <random>

using namespace fracbern;

namespace {

Kernel unit_kernel() {
    return kernel_from_expr(Expression::parse("1"), Interval::all());
}

GronwallData classical_data(const Kernel& k1) {
    GronwallData d;
    d.r = [](double) { return 0.0; };
    d.c = [](double) { return 1.0; };
    d.d = [](double) { return 1.0; };
    d.k = [](double) { return 1.0; };
    d.kernel = &k1;
    d.alpha = 1.0;
    d.a = 0.0;
    d.b = 2.0;
    return d;
}

} // namespace

TEST_CASE("bound collapses to c when d or k vanishes") {
    const Kernel k1 = unit_kernel();
    GronwallData data = classical_data(k1);
    data.c = [](double t) { return 2.0 + std::sin(t); };
    data.d = [](double) { return 0.0; };
    Grid grid(0.0, 2.0, 20);
    for (auto bound : {gronwall_bound(data, grid), gronwall_bound_simplified(data, grid)})
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(bound[i] == doctest::Approx(data.c(grid.node(i))).epsilon(1e-14));

    data.d = [](double) { return 1.0; };
    data.k = [](double) { return 0.0; };
    const auto bound = gronwall_bound(data, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(bound[i] == doctest::Approx(data.c(grid.node(i))).epsilon(1e-14));
}

TEST_CASE("classical case: bound equals e^t") {
    const Kernel k1 = unit_kernel();
    const GronwallData data = classical_data(k1);
    Grid grid(0.0, 2.0, 50);
    const auto bound = gronwall_bound(data, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(bound[i] - std::exp(grid.node(i))) <= 1e-8);

    // The converse bound is the same formula.
    const auto lower = gronwall_lower_bound(data, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(lower[i] == bound[i]);

    // Simplified: c + d*J(ck)*e^{J(dk)} = 1 + t e^t; at t = 1 this is 1 + e.
    const auto simplified = gronwall_bound_simplified(data, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.node(i);
        CHECK(std::abs(simplified[i] - (1.0 + t * std::exp(t))) <= 1e-8);
    }
}

TEST_CASE("classical case against a direct nested-quadrature oracle") {
    const Kernel k1 = unit_kernel();
    GronwallData data = classical_data(k1);
    data.c = [](double t) { return std::cos(t); };  // sign changes are allowed here
    data.d = [](double t) { return 0.5 + 0.1 * t; };
    data.k = [](double t) { return 0.3 + 0.25 * std::sin(t); };
    data.b = 1.5;
    // The 1e-8 agreement needs the O(h^2) inner interpolation error below
    // that level: h^2 |(dk)'| / 8 <= 1e-8 wants about 4000 subintervals.
    Grid grid(0.0, 1.5, 4000);
    const auto bound = gronwall_bound(data, grid);

    const QuadratureConfig tight{1e-12, 1e-12, 50};
    auto jdk = [&](double t) {
        return adaptive_quadrature([&](double s) { return data.d(s) * data.k(s); }, 0.0, t, tight)
            .value;
    };
    for (std::size_t i = 0; i < grid.size(); i += 500) {
        const double t = grid.node(i);
        const double outer =
            adaptive_quadrature(
                [&](double s) { return data.c(s) * data.k(s) * std::exp(-jdk(s)); }, 0.0, t, tight)
                .value;
        const double expected = data.c(t) + data.d(t) * outer * std::exp(jdk(t));
        CHECK(std::abs(bound[i] - expected) <= 1e-8);
    }
}

TEST_CASE("simplified bound dominates the full bound for nonnegative data") {
    std::mt19937 rng(2024u);
    std::uniform_real_distribution<double> coeff(0.0, 1.5);
    const Kernel k1 = unit_kernel();
    const Kernel conf = builtin_kernel(KernelFamily::Conformable);
    Grid grid(0.5, 2.0, 25);
    for (int trial = 0; trial < 20; ++trial) {
        const double c0 = coeff(rng), c1 = coeff(rng);
        const double d0 = coeff(rng), k0 = coeff(rng), k1c = coeff(rng);
        GronwallData data;
        data.r = [](double) { return 0.0; };
        data.c = [c0, c1](double t) { return c0 + c1 * t; };
        data.d = [d0](double t) { return d0 * (1.0 + 0.2 * std::sin(t)); };
        data.k = [k0, k1c](double t) { return k0 + k1c * std::cos(t) * std::cos(t); };
        data.kernel = trial % 2 ? &k1 : &conf;
        data.alpha = trial % 2 ? 1.0 : 0.6;
        data.a = 0.5;
        data.b = 2.0;
        const auto full = gronwall_bound(data, grid);
        const auto simplified = gronwall_bound_simplified(data, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(simplified[i] >= full[i] - 1e-8);
    }
}

TEST_CASE("simplified bound rejects negative c") {
    const Kernel k1 = unit_kernel();
    GronwallData data = classical_data(k1);
    data.c = [](double) { return -1.0; };
    Grid grid(0.0, 2.0, 20);
    CHECK_THROWS_AS(gronwall_bound_simplified(data, grid), NegativeC);
}

TEST_CASE("negative d or k is rejected at validation") {
    const Kernel k1 = unit_kernel();
    GronwallData data = classical_data(k1);
    data.d = [](double t) { return t - 1.0; };
    Grid grid(0.0, 2.0, 20);
    CHECK_THROWS_AS(gronwall_bound(data, grid), InvalidParams);
}

TEST_CASE("equality construction is dominated within slack") {
    // With constant c, d, k the integral equality r = c + d*J(kr) is solved
    // exactly by r = c * exp(d*k*J(1)), for any kernel. The bound must then
    // reproduce r up to quadrature error.
    const Kernel k1 = unit_kernel();
    const Kernel conf = builtin_kernel(KernelFamily::Conformable);
    struct Case {
        const Kernel* kernel;
        double alpha, a, b, c0, d0, k0;
    };
    for (const Case& cs : {Case{&k1, 1.0, 0.0, 2.0, 1.0, 1.0, 1.0},
                           Case{&conf, 0.7, 0.5, 2.0, 0.8, 1.2, 0.6},
                           Case{&conf, 0.3, 0.5, 1.5, 1.5, 0.4, 1.1}}) {
        GronwallData data;
        data.c = [cs](double) { return cs.c0; };
        data.d = [cs](double) { return cs.d0; };
        data.k = [cs](double) { return cs.k0; };
        data.r = [](double) { return 0.0; };
        data.kernel = cs.kernel;
        data.alpha = cs.alpha;
        data.a = cs.a;
        data.b = cs.b;

        // The inner prefix is linearly interpolated (O(h^2)); the grid must
        // be fine enough for that error to sit below the 1e-6 slack.
        Grid grid(cs.a, cs.b, 1500);
        auto one = [](double) { return 1.0; };
        const auto j1 = jintegral_cumulative(one, *cs.kernel, cs.alpha, cs.a, grid.nodes());
        std::vector<double> r(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            r[i] = cs.c0 * std::exp(cs.d0 * cs.k0 * j1[i]);

        const auto bound = gronwall_bound(data, grid);
        const BoundReport rep = verify_bound(r, bound, 1e-6);
        INFO("kernel=" << cs.kernel->id() << " alpha=" << cs.alpha
                       << " worst=" << rep.worst_violation << " at " << rep.index);
        CHECK(rep.ok);
        // The bound is tight here: it should not exceed r by much either.
        CHECK(verify_bound(bound, r, 1e-6).ok);
    }
}

TEST_CASE("homogeneous linear solution is bounded by its gronwall envelope") {
    // G y - y = 0 grows like e^{J(1)}; |y| satisfies the equality hypothesis
    // with c = |y0|, d = 1, k = 1.
    const Kernel k1 = unit_kernel();
    Grid grid(0.0, 2.0, 40);
    const Trajectory y = homogeneous_solution(Expression::parse("-1"), k1, 1.0, 0.0, 1.0, grid);
    GronwallData data = classical_data(k1);
    const auto bound = gronwall_bound(data, grid);
    CHECK(verify_bound(y.values, bound, 1e-6).ok);
}

TEST_CASE("verify_bound edge cases") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    BoundReport rep = verify_bound(v, v, 0.0);
    CHECK(rep.ok);
    CHECK(rep.worst_violation <= 0.0);

    std::vector<double> above{2.0, 3.0, 4.0};
    rep = verify_bound(above, v, 0.0);
    CHECK_FALSE(rep.ok);
    CHECK(rep.worst_violation == 1.0);

    std::vector<double> mixed{0.0, 5.0, 0.0};
    rep = verify_bound(mixed, v, 0.0);
    CHECK_FALSE(rep.ok);
    CHECK(rep.worst_violation == 3.0);
    CHECK(rep.index == 1);

    CHECK_THROWS_AS(verify_bound(v, std::vector<double>{1.0}, 0.0), LengthMismatch);
}
