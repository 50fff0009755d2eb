#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spiralmin {

/// Real function sampled on the uniform symmetric grid
/// s_i = -S + i h, h = 2S/(n-1), with n odd so that s = 0 is a node.
///
/// Derivatives are second-order: centered in the interior, one-sided at the
/// two boundary nodes.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double half_width, std::size_t n);
    GridFunction(double half_width, std::vector<double> values);

    static GridFunction sample(double half_width, std::size_t n, const std::function<double(double)>& f);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return values_.size(); }
    double step() const noexcept { return step_; }
    std::size_t center() const noexcept { return values_.size() / 2; }
    double node(std::size_t i) const noexcept;

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    std::vector<double> nodes() const;
    std::vector<double> d1() const;
    std::vector<double> d2() const;

    /// max_i |f_i|, reduced in index order.
    double sup_norm() const;
    /// Same grid (half width and node count).
    bool same_grid(const GridFunction& other) const;
    /// Function with identical grid and the given values.
    GridFunction with_values(std::vector<double> values) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double c);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

private:
    double half_width_ = 1.0;
    double step_ = 1.0;
    std::vector<double> values_;
};

}  // namespace spiralmin
