#include "spiralmin/grid_function.hpp"

#include <cmath>
#include <string>

#include "spiralmin/errors.hpp"

namespace spiralmin {

namespace {

void check_shape(double half_width, std::size_t n) {
    if (!std::isfinite(half_width) || half_width <= 0.0) {
        throw InvalidArgument("grid half width must be positive");
    }
    if (n < 5 || n % 2 == 0) {
        throw InvalidArgument("grid point count must be odd and at least 5, got " + std::to_string(n));
    }
}

}  // namespace

GridFunction::GridFunction(double half_width, std::size_t n) : GridFunction(half_width, std::vector<double>(n, 0.0)) {}

GridFunction::GridFunction(double half_width, std::vector<double> values)
    : half_width_(half_width), values_(std::move(values)) {
    check_shape(half_width_, values_.size());
    step_ = 2.0 * half_width_ / static_cast<double>(values_.size() - 1);
}

GridFunction GridFunction::sample(double half_width, std::size_t n, const std::function<double(double)>& f) {
    GridFunction g(half_width, n);
    for (std::size_t i = 0; i < n; ++i) {
        g.values_[i] = f(g.node(i));
    }
    return g;
}

double GridFunction::node(std::size_t i) const noexcept {
    // Exact zero at the center and exact symmetry of the node set.
    const auto c = static_cast<std::ptrdiff_t>(center());
    return static_cast<double>(static_cast<std::ptrdiff_t>(i) - c) * step_;
}

std::vector<double> GridFunction::nodes() const {
    std::vector<double> s(size());
    for (std::size_t i = 0; i < size(); ++i) {
        s[i] = node(i);
    }
    return s;
}

std::vector<double> GridFunction::d1() const {
    const std::size_t n = size();
    const auto& u = values_;
    std::vector<double> out(n);
    const double inv = 1.0 / (2.0 * step_);
    out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (u[i + 1] - u[i - 1]) * inv;
    }
    out[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv;
    return out;
}

std::vector<double> GridFunction::d2() const {
    const std::size_t n = size();
    const auto& u = values_;
    std::vector<double> out(n);
    const double inv = 1.0 / (step_ * step_);
    out[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv;
    }
    out[n - 1] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) * inv;
    return out;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool GridFunction::same_grid(const GridFunction& other) const {
    return size() == other.size() && half_width_ == other.half_width_;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    if (values.size() != size()) {
        throw InvalidArgument("value count does not match the grid");
    }
    return GridFunction(half_width_, std::move(values));
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (!same_grid(o)) {
        throw InvalidArgument("grid functions live on different grids");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        values_[i] += o.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    if (!same_grid(o)) {
        throw InvalidArgument("grid functions live on different grids");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        values_[i] -= o.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) {
        v *= c;
    }
    return *this;
}

}  // namespace spiralmin
