#pragma once

#include <cstddef>
#include <string>

// Small data-parallel kernels used by the quadrature and reconstruction
// inner loops. Scalar reference implementations are always available;
// an AVX2/FMA variant is selected at runtime when the CPU supports it.
// Set FINDEX_ISA=scalar (or avx2) in the environment to force a lane.

namespace findex::simd {

enum class Isa { scalar, avx2 };

Isa active_isa();
std::string isa_name();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i w[i] * a[i] * b[i]  (trapezoid-weighted inner product core)
double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Only callable when active_isa() could be avx2; present regardless so the
// equivalence tests can link, but aborts if the CPU lacks AVX2.
bool supported();
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* w, const double* a, const double* b,
                    std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace findex::simd
