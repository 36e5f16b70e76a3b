#include "fracbern/config.hpp"

#include "fracbern/csv.hpp"
#include "fracbern/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace fracbern {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double number_for(const std::string& key, const std::string& text) {
    try {
        return parse_double(text);
    } catch (const Error&) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

long long integer_for(const std::string& key, const std::string& text) {
    long long v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

bool bool_for(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

void check_expression(const std::string& key, const std::string& text) {
    try {
        Expression::parse(text);
    } catch (const Error& e) {
        throw ConfigError(key, std::string("expression does not parse: ") + e.what());
    }
}

const std::string* find(const std::map<std::string, std::string>& keys, const std::string& k) {
    auto it = keys.find(k);
    return it == keys.end() ? nullptr : &it->second;
}

const std::string& require(const std::map<std::string, std::string>& keys, const std::string& k) {
    const std::string* v = find(keys, k);
    if (!v)
        throw ConfigError(k, "required key is missing");
    return *v;
}

} // namespace

std::pair<double, std::optional<Rational>> parse_exponent(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const long long num = integer_for("n", trim(text.substr(0, slash)));
        const long long den = integer_for("n", trim(text.substr(slash + 1)));
        if (den == 0)
            throw ConfigError("n", "zero denominator");
        Rational r(num, den);
        return {r.value(), r};
    }
    const double v = number_for("n", text);
    return {v, Rational::from_double(v)};
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse_double(item));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    std::map<std::string, std::string> keys;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "line " + std::to_string(lineno) +
                                            " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config", "empty key on line " + std::to_string(lineno));
        keys[key] = value;
    }
    return keys;
}

RunConfig load_config(const std::map<std::string, std::string>& keys, ConfigProfile profile) {
    RunConfig cfg;

    if (const auto* v = find(keys, "kernel")) cfg.kernel_spec = *v;
    if (const auto* v = find(keys, "out")) cfg.out_dir = *v;
    if (const auto* v = find(keys, "method")) {
        if (*v != "exact" && *v != "fdm" && *v != "both")
            throw ConfigError("method", "must be exact, fdm or both");
        cfg.method = *v;
    }
    if (const auto* v = find(keys, "quad_abs_tol")) cfg.quad.abs_tol = number_for("quad_abs_tol", *v);
    if (const auto* v = find(keys, "quad_rel_tol")) cfg.quad.rel_tol = number_for("quad_rel_tol", *v);
    if (const auto* v = find(keys, "quad_max_depth"))
        cfg.quad.max_depth = static_cast<int>(integer_for("quad_max_depth", *v));
    if (const auto* v = find(keys, "horizon")) cfg.horizon = number_for("horizon", *v);
    if (const auto* v = find(keys, "samples"))
        cfg.samples = static_cast<int>(integer_for("samples", *v));
    if (const auto* v = find(keys, "slack")) cfg.slack = number_for("slack", *v);
    if (const auto* v = find(keys, "epsilon")) cfg.epsilon = number_for("epsilon", *v);
    if (const auto* v = find(keys, "tail_tol")) cfg.tail_tol = number_for("tail_tol", *v);
    if (const auto* v = find(keys, "horizon_cap")) cfg.horizon_cap = number_for("horizon_cap", *v);

    if (const auto* v = find(keys, "bootstrap")) {
        if (*v == "forward-euler") cfg.scheme.bootstrap = Bootstrap::ForwardEuler;
        else if (*v == "backward-euler") cfg.scheme.bootstrap = Bootstrap::BackwardEuler;
        else throw ConfigError("bootstrap", "must be forward-euler or backward-euler");
    }
    if (const auto* v = find(keys, "mid")) {
        if (*v == "midpoint3") cfg.scheme.mid = MidScheme::Midpoint3;
        else if (*v == "backward3") cfg.scheme.mid = MidScheme::Backward3;
        else if (*v == "stay-at-bootstrap") cfg.scheme.mid = MidScheme::StayAtBootstrap;
        else throw ConfigError("mid", "must be midpoint3, backward3 or stay-at-bootstrap");
    }
    if (const auto* v = find(keys, "main")) {
        if (*v == "backward5") cfg.scheme.main = MainScheme::Backward5;
        else if (*v == "stay-at-mid") cfg.scheme.main = MainScheme::StayAtMid;
        else throw ConfigError("main", "must be backward5 or stay-at-mid");
    }
    if (const auto* v = find(keys, "newton_tol"))
        cfg.scheme.newton_tol = number_for("newton_tol", *v);
    if (const auto* v = find(keys, "newton_maxit"))
        cfg.scheme.newton_maxit = static_cast<int>(integer_for("newton_maxit", *v));
    if (const auto* v = find(keys, "startup_substeps"))
        cfg.scheme.startup_substeps = static_cast<std::size_t>(integer_for("startup_substeps", *v));
    if (const auto* v = find(keys, "backward3_h_prefactor"))
        cfg.scheme.backward3_h_prefactor = bool_for("backward3_h_prefactor", *v);

    const bool needs_problem = profile != ConfigProfile::Gronwall;
    if (needs_problem) {
        cfg.p_text = require(keys, "p");
        check_expression("p", cfg.p_text);
        cfg.q_text = require(keys, "q");
        check_expression("q", cfg.q_text);
        std::tie(cfg.n, cfg.n_rational) = parse_exponent(require(keys, "n"));
        if (cfg.n == 1.0)
            throw ConfigError("n", "the Bernoulli exponent must differ from 1");
    }

    cfg.a = number_for("a", require(keys, "a"));
    if (profile == ConfigProfile::Stability) {
        if (const auto* v = find(keys, "b")) cfg.b = number_for("b", *v);
        else cfg.b = cfg.a + 1.0;  // interval end is irrelevant to the probes
    } else {
        cfg.b = number_for("b", require(keys, "b"));
    }
    if (!(cfg.b > cfg.a))
        throw ConfigError("b", "interval end must exceed its start");

    const std::string& alpha_text = require(keys, "alpha");
    try {
        cfg.alphas = parse_double_list(alpha_text);
    } catch (const Error&) {
        throw ConfigError("alpha", "malformed list '" + alpha_text + "'");
    }
    if (cfg.alphas.empty())
        throw ConfigError("alpha", "list must be non-empty");
    for (double al : cfg.alphas)
        if (!(al > 0.0 && al <= 1.0))
            throw ConfigError("alpha", "values must lie in (0, 1]");

    if (const auto* v = find(keys, "t0")) cfg.t0 = number_for("t0", *v);
    if (const auto* v = find(keys, "y0")) cfg.y0 = number_for("y0", *v);
    if (const auto* v = find(keys, "C")) cfg.constant = number_for("C", *v);

    if (profile == ConfigProfile::Solve || profile == ConfigProfile::Converge) {
        const long long n_div = integer_for("N", require(keys, "N"));
        if (n_div < 4)
            throw ConfigError("N", "needs at least 4 interval divisions");
        cfg.n_divisions = static_cast<std::size_t>(n_div);
        if (!cfg.y0 && !cfg.constant)
            throw ConfigError("y0", "either y0 (with optional t0) or C must be given");
        if (cfg.y0 && cfg.constant)
            throw ConfigError("C", "y0 and C are mutually exclusive");
    }

    if (profile == ConfigProfile::Converge) {
        const std::string& ns_text = require(keys, "Ns");
        for (double v : parse_double_list(ns_text)) {
            if (v < 4.0)
                throw ConfigError("Ns", "entries must be at least 4");
            cfg.ns_list.push_back(static_cast<std::size_t>(v));
        }
        if (cfg.ns_list.empty())
            throw ConfigError("Ns", "list must be non-empty");
    }

    if (profile == ConfigProfile::Gronwall) {
        cfg.r_text = require(keys, "r");
        check_expression("r", cfg.r_text);
        cfg.c_text = require(keys, "c");
        check_expression("c", cfg.c_text);
        cfg.d_text = require(keys, "d");
        check_expression("d", cfg.d_text);
        cfg.k_text = require(keys, "k");
        check_expression("k", cfg.k_text);
        if (cfg.alphas.size() != 1)
            throw ConfigError("alpha", "gronwall runs use a single alpha");
        const long long n_div = find(keys, "N") ? integer_for("N", *find(keys, "N")) : 200;
        if (n_div < 4)
            throw ConfigError("N", "needs at least 4 interval divisions");
        cfg.n_divisions = static_cast<std::size_t>(n_div);
    }

    if (profile == ConfigProfile::Stability) {
        if (const auto* v = find(keys, "k")) {
            cfg.k_text = *v;
            check_expression("k", cfg.k_text);
        }
    }

    return cfg;
}

Kernel RunConfig::make_kernel(ConfigProfile profile) const {
    Interval hint = Interval::closed(a, b);
    if (profile == ConfigProfile::Stability)
        hint = Interval{a, std::numeric_limits<double>::infinity(), false, true};
    try {
        return kernel_from_spec(kernel_spec, hint);
    } catch (const Error& e) {
        throw ConfigError("kernel", e.what());
    }
}

BernoulliProblem RunConfig::make_problem(const Kernel& kernel, double alpha) const {
    BernoulliProblem prob;
    prob.p = Expression::parse(p_text);
    prob.q = Expression::parse(q_text);
    prob.n = n;
    prob.n_rational = n_rational;
    prob.alpha = alpha;
    prob.kernel = &kernel;
    prob.a = a;
    prob.b = b;
    if (y0)
        prob.initial = std::make_pair(t0.value_or(a), *y0);
    else if (constant)
        prob.constant = *constant;
    return prob;
}

} // namespace fracbern
