#include "findex/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace findex {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

std::string to_string(BasisFamily::Kind kind) {
    switch (kind) {
        case BasisFamily::Kind::cosine: return "cosine";
        case BasisFamily::Kind::sine_half_integer: return "sine_half_integer";
        case BasisFamily::Kind::haar: return "haar";
        case BasisFamily::Kind::fourier_shifted: return "fourier_shifted";
    }
    return "?";
}

BasisFamily::Kind basis_kind_from_string(const std::string& name) {
    if (name == "cosine") return BasisFamily::Kind::cosine;
    if (name == "sine_half_integer" || name == "sine-half-integer")
        return BasisFamily::Kind::sine_half_integer;
    if (name == "haar") return BasisFamily::Kind::haar;
    if (name == "fourier_shifted" || name == "fourier-shifted")
        return BasisFamily::Kind::fourier_shifted;
    throw std::invalid_argument("unknown basis family: " + name);
}

HaarSupport haar_support(int index) {
    if (index < 1) throw std::invalid_argument("haar_support: index must be >= 1");
    int j = 0;
    while ((1 << (j + 1)) <= index) ++j;
    const int l = index - (1 << j) + 1;
    HaarSupport s;
    s.level = j;
    s.translate = l;
    const double scale = static_cast<double>(1 << j);
    s.lo = (l - 1) / scale;
    s.mid = (l - 0.5) / scale;
    s.hi = l / scale;
    s.height = std::exp2(0.5 * j);
    return s;
}

namespace {

double haar_value(int index, double x) {
    const HaarSupport s = haar_support(index);
    // Half-open intervals; the domain endpoint x=1 belongs to the last cell.
    if (x >= s.lo && x < s.mid) return s.height;
    if ((x >= s.mid && x < s.hi) || (x == 1.0 && s.hi == 1.0)) return -s.height;
    return 0.0;
}

// Normalization of cos(omega pi x) on [0,1]: ||cos(omega pi .)||^2
// = 1/2 + sin(2 pi omega) / (4 pi omega).
double fourier_shifted_norm(double omega) {
    return std::sqrt(0.5 + std::sin(2.0 * kPi * omega) / (4.0 * kPi * omega));
}

}  // namespace

double basis_value(const BasisFamily& family, int index, double x) {
    if (index < 1) throw std::invalid_argument("basis_value: index must be >= 1");
    switch (family.kind) {
        case BasisFamily::Kind::cosine:
            return kSqrt2 * std::cos(index * kPi * x);
        case BasisFamily::Kind::sine_half_integer:
            return kSqrt2 * std::sin(kPi * (index - 0.5) * x);
        case BasisFamily::Kind::haar:
            return haar_value(index, x);
        case BasisFamily::Kind::fourier_shifted: {
            const double omega = family.a * index + family.b;
            if (omega == std::floor(omega))
                throw std::invalid_argument(
                    "fourier_shifted: omega must not be an integer");
            return std::cos(omega * kPi * x) / fourier_shifted_norm(omega);
        }
    }
    throw std::logic_error("basis_value: unreachable");
}

GridFunction basis_eval(const BasisFamily& family, int index, const GridPtr& grid) {
    Eigen::VectorXd v(grid->m);
    for (int j = 0; j < grid->m; ++j)
        v[j] = basis_value(family, index, grid->points[j]);
    return GridFunction(grid, std::move(v));
}

Eigen::MatrixXd basis_matrix(const BasisFamily& family, int M, const Grid& grid) {
    Eigen::MatrixXd phi(grid.m, M);
    for (int i = 1; i <= M; ++i)
        for (int j = 0; j < grid.m; ++j)
            phi(j, i - 1) = basis_value(family, i, grid.points[j]);
    return phi;
}

double haar_inner_exact(int index_a, int index_b) {
    const HaarSupport a = haar_support(index_a);
    const HaarSupport b = haar_support(index_b);
    std::vector<double> cuts = {a.lo, a.mid, a.hi, b.lo, b.mid, b.hi, 0.0, 1.0};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto piece = [](const HaarSupport& s, double x) {
        if (x >= s.lo && x < s.mid) return s.height;
        if (x >= s.mid && x < s.hi) return -s.height;
        return 0.0;
    };
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double xm = 0.5 * (cuts[k] + cuts[k + 1]);
        acc += (cuts[k + 1] - cuts[k]) * piece(a, xm) * piece(b, xm);
    }
    return acc;
}

}  // namespace findex
