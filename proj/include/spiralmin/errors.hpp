#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spiralmin {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// det(g) too small relative to the scale of the gradient, or a zero tangent column.
class DegenerateImmersion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfDomain : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A grid node where the perturbed jet is degenerate or too far from conformal.
class SolverDomainError : public std::runtime_error {
public:
    SolverDomainError(std::size_t node, double s, const std::string& what)
        : std::runtime_error("node " + std::to_string(node) + " (s=" + std::to_string(s) + "): " + what),
          node_(node), s_(s) {}

    std::size_t node() const noexcept { return node_; }
    double s() const noexcept { return s_; }

private:
    std::size_t node_;
    double s_;
};

class Diverged : public std::runtime_error {
public:
    Diverged(const std::string& what, std::vector<double> residual_history)
        : std::runtime_error(what), history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

}  // namespace spiralmin
