#pragma once

#include <Eigen/Dense>
#include <memory>

#include "findex/errors.hpp"

namespace findex {

// Uniform grid on [0,1] with composite trapezoid quadrature weights.
struct Grid {
    int m = 0;
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
};

using GridPtr = std::shared_ptr<const Grid>;

// m >= 3 equally spaced points including both endpoints; weights sum to 1.
GridPtr make_grid(int m);

bool same_grid(const Grid& a, const Grid& b);

// A real function on [0,1] represented by its values on a grid.
class GridFunction {
public:
    GridFunction(GridPtr grid, Eigen::VectorXd values);

    // Zero function on the grid.
    explicit GridFunction(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }

    GridFunction operator+(const GridFunction& other) const;
    GridFunction operator-(const GridFunction& other) const;
    GridFunction operator*(double s) const;

private:
    GridPtr grid_;
    Eigen::VectorXd values_;
};

inline GridFunction operator*(double s, const GridFunction& f) { return f * s; }

// Trapezoid-quadrature L2 inner product: sum_j w_j f_j g_j.
double inner_product(const GridFunction& f, const GridFunction& g);

double l2_norm(const GridFunction& f);
double l2_distance(const GridFunction& f, const GridFunction& g);

void require_same_grid(const GridFunction& f, const GridFunction& g,
                       const char* where);

}  // namespace findex
