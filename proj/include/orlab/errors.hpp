#pragma once

#include <stdexcept>
#include <string>

namespace orlab {

/// Exponent argument exceeded the evaluation cap; carries the offending node.
class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& what, std::size_t node, double exponent)
        : std::runtime_error(what), node_(node), exponent_(exponent) {}
    std::size_t node() const noexcept { return node_; }
    double exponent() const noexcept { return exponent_; }

private:
    std::size_t node_;
    double exponent_;
};

/// A bracketing or iterative search failed to converge within its budget.
class NonConvergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The extraction loop made no progress on a level.
class StagnationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A sampled closure returned a non-finite value; carries the node.
class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, std::size_t node, double coordinate)
        : std::runtime_error(what), node_(node), coordinate_(coordinate) {}
    std::size_t node() const noexcept { return node_; }
    double coordinate() const noexcept { return coordinate_; }

private:
    std::size_t node_;
    double coordinate_;
};

/// Time stepping drove the field past the exponent cap (blow-up territory).
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& what, double time, std::size_t node, double value)
        : std::runtime_error(what), time_(time), node_(node), value_(value) {}
    double time() const noexcept { return time_; }
    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    double time_;
    std::size_t node_;
    double value_;
};

} // namespace orlab
