#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "findex/simd.hpp"

using namespace findex;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar dot matches straightforward accumulation") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{4.0, -5.0, 6.0};
    CHECK(simd::scalar::dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
    CHECK(simd::scalar::dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("scalar weighted_dot applies the weights") {
    const std::vector<double> w{0.25, 0.5, 0.25};
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(simd::scalar::weighted_dot(w.data(), ones.data(), ones.data(), 3) ==
          doctest::Approx(1.0));
}

TEST_CASE("scalar axpy") {
    std::vector<double> y{1.0, 1.0};
    const std::vector<double> x{2.0, 3.0};
    simd::scalar::axpy(0.5, x.data(), y.data(), 2);
    CHECK(y[0] == doctest::Approx(2.0));
    CHECK(y[1] == doctest::Approx(2.5));
}

TEST_CASE("avx2 variants agree with scalar when supported") {
    if (!simd::avx2::supported()) {
        MESSAGE("AVX2 not available; equivalence check skipped");
        return;
    }
    // Sweep lengths around the vector width to hit every tail case.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u,
                          31u, 64u, 257u, 1000u}) {
        const auto a = random_vec(n, 11u + static_cast<std::uint32_t>(n));
        const auto b = random_vec(n, 29u + static_cast<std::uint32_t>(n));
        const auto w = random_vec(n, 47u + static_cast<std::uint32_t>(n));
        const double ds = simd::scalar::dot(a.data(), b.data(), n);
        const double dv = simd::avx2::dot(a.data(), b.data(), n);
        CHECK(std::abs(ds - dv) <= 1e-12 * (1.0 + std::abs(ds)));
        const double ws = simd::scalar::weighted_dot(w.data(), a.data(), b.data(), n);
        const double wv = simd::avx2::weighted_dot(w.data(), a.data(), b.data(), n);
        CHECK(std::abs(ws - wv) <= 1e-12 * (1.0 + std::abs(ws)));
        auto ys = random_vec(n, 5u);
        auto yv = ys;
        simd::scalar::axpy(1.7, a.data(), ys.data(), n);
        simd::avx2::axpy(1.7, a.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(ys[i] - yv[i]) <= 1e-14 * (1.0 + std::abs(ys[i])));
    }
}

TEST_CASE("dispatch reports a valid lane and routes correctly") {
    const simd::Isa isa = simd::active_isa();
    CHECK((isa == simd::Isa::scalar || isa == simd::Isa::avx2));
    CHECK((simd::isa_name() == "scalar" || simd::isa_name() == "avx2"));
    const auto a = random_vec(100, 1);
    const auto b = random_vec(100, 2);
    const double top = simd::dot(a.data(), b.data(), 100);
    const double ref = simd::scalar::dot(a.data(), b.data(), 100);
    CHECK(std::abs(top - ref) <= 1e-12 * (1.0 + std::abs(ref)));
}
