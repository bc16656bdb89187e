#pragma once

#include <memory>
#include <vector>

#include "vhc/errors.hpp"

namespace vhc {

// Log-spaced positive radial grid.
struct RadialGrid {
    std::vector<double> nodes;

    static RadialGrid log_spaced(double r_min, double r_max, int n);
    // Same, but with `anchor` inserted as an exact node (if inside range).
    static RadialGrid log_spaced_through(double r_min, double r_max, int n,
                                         double anchor);

    int size() const { return int(nodes.size()); }
    double r_min() const { return nodes.front(); }
    double r_max() const { return nodes.back(); }
    // Largest i with nodes[i] <= r, clamped to [0, size()-2].
    int bracket(double r) const;
    void validate() const;
};

// Natural cubic spline through (x_i, y_i).
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::shared_ptr<const std::vector<double>> x,
                std::vector<double> y);

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
    bool empty() const { return !x_ || x_->empty(); }

  private:
    std::shared_ptr<const std::vector<double>> x_;
    std::vector<double> y_, m_;  // m: second derivatives at nodes
    int bracket(double x) const;
};

// Cubic Hermite interpolant from values and slopes at nodes.
class HermiteSeries {
  public:
    HermiteSeries() = default;
    HermiteSeries(std::shared_ptr<const std::vector<double>> x,
                  std::vector<double> y, std::vector<double> d);

    double value(double x) const;
    double deriv(double x) const;
    bool empty() const { return !x_ || x_->empty(); }

  private:
    std::shared_ptr<const std::vector<double>> x_;
    std::vector<double> y_, d_;
    int bracket(double x) const;
};

}  // namespace vhc
