#ifndef FRACBERN_CONFIG_HPP
#define FRACBERN_CONFIG_HPP

#include "fracbern/bernoulli.hpp"
#include "fracbern/fdm.hpp"
#include "fracbern/kernel.hpp"
#include "fracbern/quadrature.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracbern {

// Which keys a command requires from its config.
enum class ConfigProfile { Solve, Gronwall, Stability, Converge };

struct RunConfig {
    std::string kernel_spec = "conformable";
    std::vector<double> alphas;
    std::string p_text, q_text;
    double n = 2.0;
    std::optional<Rational> n_rational;
    double a = 0.0, b = 1.0;
    std::optional<double> t0, y0, constant;
    std::size_t n_divisions = 5000;
    std::string method = "exact";  // exact | fdm | both
    SchemeConfig scheme;
    QuadratureConfig quad;
    std::string out_dir = ".";
    double horizon = 1e6;
    int samples = 64;
    double slack = 1e-6;
    std::string r_text, c_text, d_text, k_text;
    double epsilon = 1.0;
    double tail_tol = 1e-10;
    double horizon_cap = 1e15;
    std::vector<std::size_t> ns_list;

    // Builds the configured kernel. General/custom kernels get their validity
    // domain narrowed to the interval the profile actually uses: [a, b] for
    // interval runs, [a, inf) for stability probing.
    Kernel make_kernel(ConfigProfile profile = ConfigProfile::Solve) const;
    BernoulliProblem make_problem(const Kernel& kernel, double alpha) const;
};

// Flat `key = value` lines, '#' comments, blank lines ignored.
// Throws ConfigError for unreadable files or malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Validates and converts merged key/value pairs (file keys with flag
// overrides already applied). Throws ConfigError naming the offending key.
RunConfig load_config(const std::map<std::string, std::string>& keys, ConfigProfile profile);

// "3" or "3/4" -> (value, optional rational form). Integral decimals get an
// implicit rational form so the odd-denominator power rule can apply.
std::pair<double, std::optional<Rational>> parse_exponent(const std::string& text);

std::vector<double> parse_double_list(const std::string& text);

} // namespace fracbern

#endif // FRACBERN_CONFIG_HPP
