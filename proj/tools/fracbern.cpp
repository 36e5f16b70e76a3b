// Command-line front end: solve generalized Bernoulli problems with a
// pluggable kernel, reproduce the worked examples and their comparison
// tables, run convergence studies, and evaluate Gronwall bounds, stability
// verdicts and the point operators.

#include <CLI11.hpp>

#include "fracbern/bernoulli.hpp"
#include "fracbern/config.hpp"
#include "fracbern/csv.hpp"
#include "fracbern/errors.hpp"
#include "fracbern/fdm.hpp"
#include "fracbern/gronwall.hpp"
#include "fracbern/operators.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fb = fracbern;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    std::string alpha_list;
    std::string method;
    long long n_divisions = -1;
};

std::map<std::string, std::string> merged_keys(const GlobalFlags& g) {
    std::map<std::string, std::string> keys;
    if (!g.config_path.empty())
        keys = fb::read_config_file(g.config_path);
    if (const char* tol = std::getenv("FRACBERN_TOL")) {
        // Environment default; explicit file keys and flags win.
        if (!keys.count("quad_abs_tol")) keys["quad_abs_tol"] = tol;
        if (!keys.count("quad_rel_tol")) keys["quad_rel_tol"] = tol;
    }
    if (!g.out_dir.empty()) keys["out"] = g.out_dir;
    if (!g.alpha_list.empty()) keys["alpha"] = g.alpha_list;
    if (!g.method.empty()) keys["method"] = g.method;
    if (g.n_divisions >= 0) keys["N"] = std::to_string(g.n_divisions);
    return keys;
}

std::string out_path(const fb::RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void warn_truncated(const fb::Trajectory& traj) {
    if (traj.blowup)
        std::cerr << "warning: solution blows up between t = " << fb::format_double(traj.blowup->t_before)
                  << " and t = " << fb::format_double(traj.blowup->t_after)
                  << "; trajectory truncated\n";
}

int cmd_solve(const GlobalFlags& g) {
    const fb::RunConfig cfg = fb::load_config(merged_keys(g), fb::ConfigProfile::Solve);
    const fb::Kernel kernel = cfg.make_kernel();
    for (double alpha : cfg.alphas) {
        const fb::BernoulliProblem prob = cfg.make_problem(kernel, alpha);
        const fb::Grid grid(cfg.a, cfg.b, cfg.n_divisions);
        std::vector<std::vector<double>> rows;
        std::vector<std::string> header;
        if (cfg.method == "both") {
            const fb::Trajectory exact = fb::exact_solution(prob, grid, cfg.quad);
            const fb::Trajectory fdm = fb::solve_fdm(prob, grid, cfg.scheme);
            warn_truncated(exact);
            header = {"t", "y_exact", "y_fdm", "abs_error"};
            const std::size_t count = std::min(exact.values.size(), fdm.values.size());
            for (std::size_t i = 0; i < count; ++i)
                rows.push_back({exact.nodes[i], exact.values[i], fdm.values[i],
                                std::abs(exact.values[i] - fdm.values[i])});
        } else {
            const fb::Trajectory traj = cfg.method == "exact"
                                            ? fb::exact_solution(prob, grid, cfg.quad)
                                            : fb::solve_fdm(prob, grid, cfg.scheme);
            warn_truncated(traj);
            header = {"t", "y"};
            for (std::size_t i = 0; i < traj.values.size(); ++i)
                rows.push_back({traj.nodes[i], traj.values[i]});
        }
        const std::string path =
            out_path(cfg, "solve_alpha_" + fb::format_double(alpha) + ".csv");
        fb::write_csv(path, header, rows);
        std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
    }
    return 0;
}

struct ExampleSpec {
    const char* p;
    const char* q;
    const char* kernel;
    double a, b, y0;
    bool comparison_table;  // examples 1 and 3 carry an FDM vs exact table
    const char* label;
};

ExampleSpec example_spec(int which) {
    switch (which) {
        case 1:
            return {"1", "1", "conformable", 0.5, 2.0, -1.0, true, "example1"};
        case 2:
            return {"exp(t)", "exp(t)", "expshift", 0.5, 6.0, -0.5, false, "example2"};
        default:
            return {"exp(-t^2)", "t", "expscaled", -3.0, 3.0, 1.0, true, "example3"};
    }
}

int cmd_example(int which, const GlobalFlags& g) {
    const ExampleSpec ex = example_spec(which);
    std::map<std::string, std::string> keys = merged_keys(g);
    keys["p"] = ex.p;
    keys["q"] = ex.q;
    keys["n"] = "2";
    keys["kernel"] = ex.kernel;
    keys["a"] = fb::format_double(ex.a);
    keys["b"] = fb::format_double(ex.b);
    keys["y0"] = fb::format_double(ex.y0);
    if (!keys.count("alpha")) keys["alpha"] = "0.1,0.3,0.5,0.7,0.9,1.0";
    if (!keys.count("N")) keys["N"] = "5000";
    const fb::RunConfig cfg = fb::load_config(keys, fb::ConfigProfile::Solve);
    const fb::Kernel kernel = cfg.make_kernel();

    for (double alpha : cfg.alphas) {
        const fb::BernoulliProblem prob = cfg.make_problem(kernel, alpha);
        const fb::Grid grid(cfg.a, cfg.b, cfg.n_divisions);
        const fb::Trajectory traj = fb::exact_solution(prob, grid, cfg.quad);
        warn_truncated(traj);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            rows.push_back({traj.nodes[i], traj.values[i]});
        const std::string path = out_path(
            cfg, std::string(ex.label) + "_alpha_" + fb::format_double(alpha) + ".csv");
        fb::write_csv(path, {"t", "y"}, rows);
        std::cout << "wrote " << path << " y(" << fb::format_double(traj.nodes.front())
                  << ") = " << fb::format_double(traj.values.front()) << ", y("
                  << fb::format_double(traj.nodes.back())
                  << ") = " << fb::format_double(traj.values.back()) << "\n";
    }

    if (ex.comparison_table) {
        const double alpha = 0.5;  // the comparison tables use alpha = 1/2
        const fb::BernoulliProblem prob = cfg.make_problem(kernel, alpha);
        const fb::Grid grid(cfg.a, cfg.b, cfg.n_divisions);
        const fb::Trajectory exact = fb::exact_solution(prob, grid, cfg.quad);
        const fb::Trajectory fdm = fb::solve_fdm(prob, grid, cfg.scheme);
        std::vector<std::vector<double>> rows;
        double max_err = 0.0;
        const std::size_t count = std::min(exact.values.size(), fdm.values.size());
        for (std::size_t i = 0; i < count; ++i) {
            const double err = std::abs(exact.values[i] - fdm.values[i]);
            max_err = std::max(max_err, err);
            rows.push_back({exact.nodes[i], exact.values[i], fdm.values[i], err});
        }
        const std::string path = out_path(cfg, std::string(ex.label) + "_table.csv");
        fb::write_csv(path, {"t", "y_exact", "y_fdm", "abs_error"}, rows);
        std::cout << "wrote " << path << "\n";
        std::cout << "summary: alpha = 0.5, N = " << cfg.n_divisions
                  << ", max |y_fdm - y_exact| = " << fb::format_double(max_err)
                  << ", endpoint exact = " << fb::format_double(exact.values.back())
                  << ", endpoint fdm = " << fb::format_double(fdm.values.back()) << "\n";
    }
    return 0;
}

int cmd_converge(const GlobalFlags& g) {
    const fb::RunConfig cfg = fb::load_config(merged_keys(g), fb::ConfigProfile::Converge);
    const fb::Kernel kernel = cfg.make_kernel();
    const double alpha = cfg.alphas.front();
    const fb::BernoulliProblem prob = cfg.make_problem(kernel, alpha);

    // Reference endpoint from the closed form on the largest requested grid.
    const fb::Grid ref_grid(cfg.a, cfg.b, cfg.ns_list.back());
    const fb::Trajectory ref = fb::exact_solution(prob, ref_grid, cfg.quad);
    if (ref.blowup)
        throw fb::SingularSolution("reference solution blows up inside the interval",
                                   ref.blowup->t_before, ref.blowup->t_after);
    const auto rows = fb::convergence_study(prob, ref, cfg.ns_list, cfg.scheme);

    std::vector<std::vector<double>> csv_rows;
    for (const auto& r : rows) {
        csv_rows.push_back({static_cast<double>(r.n), r.h, r.endpoint_error, r.estimated_order});
        std::cout << "N = " << r.n << " h = " << fb::format_double(r.h)
                  << " error = " << fb::format_double(r.endpoint_error)
                  << " order = " << fb::format_double(r.estimated_order) << "\n";
    }
    const std::string path = out_path(cfg, "converge.csv");
    fb::write_csv(path, {"N", "h", "error", "order"}, csv_rows);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_gronwall(const GlobalFlags& g) {
    const fb::RunConfig cfg = fb::load_config(merged_keys(g), fb::ConfigProfile::Gronwall);
    const fb::Kernel kernel = cfg.make_kernel();
    const double alpha = cfg.alphas.front();

    const fb::Expression re = fb::Expression::parse(cfg.r_text);
    const fb::Expression ce = fb::Expression::parse(cfg.c_text);
    const fb::Expression de = fb::Expression::parse(cfg.d_text);
    const fb::Expression ke = fb::Expression::parse(cfg.k_text);
    fb::GronwallData data;
    data.r = [re, alpha](double t) { return re.eval(t, alpha); };
    data.c = [ce, alpha](double t) { return ce.eval(t, alpha); };
    data.d = [de, alpha](double t) { return de.eval(t, alpha); };
    data.k = [ke, alpha](double t) { return ke.eval(t, alpha); };
    data.kernel = &kernel;
    data.alpha = alpha;
    data.a = cfg.a;
    data.b = cfg.b;

    const fb::Grid grid(cfg.a, cfg.b, cfg.n_divisions);
    const std::vector<double> bound = fb::gronwall_bound(data, grid, cfg.quad);
    std::vector<double> r_values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        r_values[i] = data.r(grid.node(i));
    const fb::BoundReport report = fb::verify_bound(r_values, bound, cfg.slack);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i)
        rows.push_back({grid.node(i), r_values[i], bound[i],
                        r_values[i] > bound[i] + cfg.slack ? 1.0 : 0.0});
    const std::string path = out_path(cfg, "gronwall.csv");
    fb::write_csv(path, {"t", "r", "bound", "violated"}, rows);
    std::cout << "wrote " << path << "\n";
    std::cout << "verdict: " << (report.ok ? "ok" : "violated")
              << " worst_violation = " << fb::format_double(report.worst_violation)
              << " at index " << report.index << "\n";
    return 0;  // a violated bound is a verdict, not an error
}

int cmd_stability(const GlobalFlags& g) {
    const fb::RunConfig cfg = fb::load_config(merged_keys(g), fb::ConfigProfile::Stability);
    const fb::Kernel kernel = cfg.make_kernel(fb::ConfigProfile::Stability);
    const double alpha = cfg.alphas.front();
    fb::BernoulliProblem prob = cfg.make_problem(kernel, alpha);
    if (!prob.initial && !prob.constant)
        prob.constant = 1.0;  // the classification only probes p and q

    const fb::StabilityVerdict v = fb::classify_stability(prob, cfg.horizon, cfg.samples, cfg.quad);
    std::cout << "classification: " << fb::to_string(v.classification) << "\n";
    std::cout << "evidence: J(p) final = " << fb::format_double(v.j_final)
              << ", min = " << fb::format_double(v.j_min)
              << ", horizon = " << fb::format_double(v.horizon)
              << ", monotone_increasing = " << (v.monotone_increasing ? "true" : "false")
              << ", monotone_decreasing = " << (v.monotone_decreasing ? "true" : "false")
              << ", p_min = " << fb::format_double(v.p_min)
              << ", q_max = " << fb::format_double(v.q_max) << "\n";

    if (!cfg.k_text.empty()) {
        const fb::UniformBound ub =
            fb::uniform_stability_bound(fb::Expression::parse(cfg.k_text), kernel, alpha, cfg.a,
                                        cfg.epsilon, cfg.tail_tol, cfg.horizon_cap, cfg.quad);
        if (ub.applicable)
            std::cout << "uniform bound: N = " << fb::format_double(ub.n_value)
                      << ", delta(" << fb::format_double(cfg.epsilon)
                      << ") = " << fb::format_double(ub.delta) << " (uniformly stable)\n";
        else
            std::cout << "uniform bound: not applicable (integral of k/T does not converge)\n";
    }
    return 0;
}

struct OperatorArgs {
    std::string op;
    std::string f_text;
    std::string kernel_spec = "conformable";
    double alpha = 0.5;
    double t = 1.0;
    double a = 0.0;
    double b = 1.0;
};

int cmd_operators(const OperatorArgs& args) {
    const fb::Kernel kernel = fb::kernel_from_spec(args.kernel_spec);
    const fb::Expression expr = fb::Expression::parse(args.f_text);
    auto f = [&expr, &args](double t) { return expr.eval(t, args.alpha); };
    fb::QuadratureConfig quad;
    if (const char* tol = std::getenv("FRACBERN_TOL")) {
        quad.abs_tol = fb::parse_double(tol);
        quad.rel_tol = quad.abs_tol;
    }

    double value = 0.0;
    if (args.op == "gderiv")
        value = fb::gderiv(f, kernel, fb::AlphaOrder(args.alpha), args.t);
    else if (args.op == "gderiv-classical")
        value = fb::gderiv_via_classical(f, kernel, fb::AlphaOrder(args.alpha), args.t);
    else if (args.op == "jintegral")
        value = fb::jintegral(f, kernel, args.alpha, args.a, args.t, quad);
    else if (args.op == "adjoint")
        value = fb::adjoint_apply(f, kernel, args.alpha, args.t, args.b, quad);
    else if (args.op == "improper") {
        const fb::ImproperResult res = fb::improper_jintegral(f, kernel, args.alpha, args.a,
                                                              1e-10, 1e15, quad);
        switch (res.status) {
            case fb::ImproperResult::Status::Converged:
                std::cout << "converged " << fb::format_double(res.value) << "\n";
                return 0;
            case fb::ImproperResult::Status::Divergent:
                std::cout << "divergent\n";
                return 0;
            case fb::ImproperResult::Status::Undetermined:
                std::cout << "undetermined\n";
                return 0;
        }
    } else {
        throw fb::ConfigError("op", "unknown operator '" + args.op + "'");
    }
    std::cout << fb::format_double(value) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Bernoulli solver with pluggable derivative kernel"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--config", g.config_path, "flat key = value config file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--alpha", g.alpha_list, "comma-separated alpha list");
    app.add_option("--method", g.method, "exact | fdm | both");
    app.add_option("--n-divisions", g.n_divisions, "interval divisions N");

    auto* solve = app.add_subcommand("solve", "solve a configured problem to CSV");
    int which_example = 1;
    auto* example = app.add_subcommand("example", "reproduce a worked example");
    example->add_option("which", which_example, "example number")->required()
        ->check(CLI::Range(1, 3));
    auto* converge = app.add_subcommand("converge", "endpoint convergence study");
    auto* gronwall = app.add_subcommand("gronwall", "evaluate a Gronwall bound");
    auto* stability = app.add_subcommand("stability", "classify the trivial solution");

    OperatorArgs op_args;
    auto* operators = app.add_subcommand("operators", "point-evaluate the operators");
    operators->add_option("--op", op_args.op,
                          "gderiv | gderiv-classical | jintegral | adjoint | improper")
        ->required();
    operators->add_option("--f", op_args.f_text, "integrand/function expression")->required();
    operators->add_option("--kernel", op_args.kernel_spec, "kernel spec");
    operators->add_option("--op-alpha", op_args.alpha, "order alpha");
    operators->add_option("--t", op_args.t, "evaluation point");
    operators->add_option("--a", op_args.a, "base point");
    operators->add_option("--b", op_args.b, "right endpoint (adjoint)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(g);
        if (example->parsed()) return cmd_example(which_example, g);
        if (converge->parsed()) return cmd_converge(g);
        if (gronwall->parsed()) return cmd_gronwall(g);
        if (stability->parsed()) return cmd_stability(g);
        if (operators->parsed()) return cmd_operators(op_args);
    } catch (const fb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
