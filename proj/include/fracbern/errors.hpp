#ifndef FRACBERN_ERRORS_HPP
#define FRACBERN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbern {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- expression parsing / evaluation ---

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' (at byte " + std::to_string(offset) + ")"),
          name_(name), offset_(offset) {}
    const std::string& name() const { return name_; }
    std::size_t offset() const { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// --- kernel construction ---

class PositivityViolation : public Error {
public:
    PositivityViolation(const std::string& kernel_id, double t, double alpha, double value)
        : Error("kernel '" + kernel_id + "' is not positive: T(" + std::to_string(t) + ", " +
                std::to_string(alpha) + ") = " + std::to_string(value)),
          t_(t), alpha_(alpha), value_(value) {}
    double t() const { return t_; }
    double alpha() const { return alpha_; }
    double value() const { return value_; }

private:
    double t_, alpha_, value_;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// --- operators ---

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& msg, double best_estimate)
        : Error(msg), best_(best_estimate) {}
    double best_estimate() const { return best_; }

private:
    double best_;
};

class ToleranceNotMet : public Error {
public:
    ToleranceNotMet(const std::string& msg, double estimate, double error_bound)
        : Error(msg), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_, error_bound_;
};

class NegativeIntegrand : public Error {
public:
    using Error::Error;
};

// --- gronwall ---

class NegativeC : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

// --- bernoulli ---

class NonRealPower : public Error {
public:
    using Error::Error;
};

class SingularSolution : public Error {
public:
    SingularSolution(const std::string& msg, double t_before, double t_after)
        : Error(msg), t_before_(t_before), t_after_(t_after) {}
    // Nodes bracketing the sign change of the solution bracket.
    double t_before() const { return t_before_; }
    double t_after() const { return t_after_; }

private:
    double t_before_, t_after_;
};

// --- fdm ---

class RootNotFound : public Error {
public:
    RootNotFound(const std::string& msg, double last_iterate, double residual)
        : Error(msg), last_(last_iterate), residual_(residual) {}
    double last_iterate() const { return last_; }
    double residual() const { return residual_; }

private:
    double last_, residual_;
};

class NonFinite : public Error {
public:
    NonFinite(const std::string& msg, std::size_t node_index)
        : Error(msg + " (node " + std::to_string(node_index) + ")"), index_(node_index) {}
    std::size_t node_index() const { return index_; }

private:
    std::size_t index_;
};

// --- cli / config ---

class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& reason)
        : Error("config key '" + key + "': " + reason), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace fracbern

#endif // FRACBERN_ERRORS_HPP
