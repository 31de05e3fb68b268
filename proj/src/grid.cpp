#include "findex/grid.hpp"

#include <cmath>

#include "findex/simd.hpp"

namespace findex {

GridPtr make_grid(int m) {
    if (m < 3)
        throw std::invalid_argument("make_grid: m must be >= 3, got " +
                                    std::to_string(m));
    auto g = std::make_shared<Grid>();
    g->m = m;
    g->points.resize(m);
    g->weights.resize(m);
    const double h = 1.0 / (m - 1);
    for (int j = 0; j < m; ++j) g->points[j] = j * h;
    g->points[m - 1] = 1.0;
    g->weights.setConstant(h);
    g->weights[0] = h / 2;
    g->weights[m - 1] = h / 2;
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    if (&a == &b) return true;
    return a.m == b.m && a.points == b.points;
}

GridFunction::GridFunction(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("GridFunction: null grid");
    if (values_.size() != grid_->m)
        throw std::invalid_argument("GridFunction: values length " +
                                    std::to_string(values_.size()) +
                                    " != grid size " + std::to_string(grid_->m));
    if (!values_.allFinite())
        throw std::invalid_argument("GridFunction: non-finite values");
}

GridFunction::GridFunction(GridPtr grid)
    : GridFunction(grid, Eigen::VectorXd::Zero(grid ? grid->m : 0)) {}

void require_same_grid(const GridFunction& f, const GridFunction& g,
                       const char* where) {
    if (!same_grid(f.grid(), g.grid()))
        throw IncompatibleGrids(std::string(where) +
                                ": operands on different grids");
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
    require_same_grid(*this, other, "GridFunction::operator+");
    return GridFunction(grid_, values_ + other.values_);
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
    require_same_grid(*this, other, "GridFunction::operator-");
    return GridFunction(grid_, values_ - other.values_);
}

GridFunction GridFunction::operator*(double s) const {
    return GridFunction(grid_, values_ * s);
}

double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "inner_product");
    const Grid& grid = f.grid();
    return simd::weighted_dot(grid.weights.data(), f.values().data(),
                              g.values().data(), grid.m);
}

double l2_norm(const GridFunction& f) {
    return std::sqrt(std::max(0.0, inner_product(f, f)));
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
    GridFunction d = f - g;
    return l2_norm(d);
}

}  // namespace findex
