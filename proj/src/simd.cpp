#include "findex/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace findex::simd {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace scalar

namespace {

Isa detect_isa() {
    if (const char* env = std::getenv("FINDEX_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2::supported()) return Isa::avx2;
        return Isa::scalar;
    }
    return avx2::supported() ? Isa::avx2 : Isa::scalar;
}

const Isa g_isa = detect_isa();

}  // namespace

Isa active_isa() { return g_isa; }

std::string isa_name() { return g_isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
    return g_isa == Isa::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n) {
    return g_isa == Isa::avx2 ? avx2::weighted_dot(w, a, b, n)
                              : scalar::weighted_dot(w, a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    if (g_isa == Isa::avx2)
        avx2::axpy(alpha, x, y, n);
    else
        scalar::axpy(alpha, x, y, n);
}

}  // namespace findex::simd
