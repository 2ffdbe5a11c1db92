#include <gtest/gtest.h>

#include <cmath>

#include "chromasim/field_synthesis.hpp"
#include "oracles.hpp"

using namespace chromasim;

namespace {

double field_mean(const ScalarField& f) {
    double s = 0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

double field_var(const ScalarField& f) {
    const double m = field_mean(f);
    double s = 0;
    for (double v : f.values()) s += (v - m) * (v - m);
    return s / static_cast<double>(f.size());
}

}  // namespace

TEST(Perlin, Deterministic) {
    SeededRng a(5, 1), b(5, 1);
    EXPECT_EQ(perlin_field(64, 48, 1, 0.5, 16, a), perlin_field(64, 48, 1, 0.5, 16, b));
}

TEST(Perlin, BoundedAndCentred) {
    SeededRng rng(11, 0);
    const auto f = perlin_field(256, 256, 6, 0.5, 64, rng);
    double lo = 1e9, hi = -1e9;
    for (double v : f.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    EXPECT_GE(lo, -1.0);
    EXPECT_LE(hi, 1.0);
    EXPECT_NEAR(field_mean(f), 0.0, 0.05);
}

TEST(Perlin, SecondOctaveIsHalfWeightedDoubledLayer) {
    SeededRng a(21, 3), b(21, 3), c(21, 3);
    const auto one = perlin_field(128, 96, 1, 0.5, 32, a);
    const auto two = perlin_field(128, 96, 2, 0.5, 32, b);
    const auto seed = c.next_u64();
    const auto layer = perlin_layer(128, 96, 1, 32, seed);
    const double norm = perlin_normalizer(2, 0.5);
    ASSERT_EQ(norm, perlin_normalizer(1, 0.5));
    for (std::size_t i = 0; i < one.size(); ++i) {
        ASSERT_NEAR(two.values()[i] - one.values()[i], 0.5 * layer.values()[i] / norm, 1e-9);
    }
}

TEST(Perlin, RejectsEmpty) {
    SeededRng rng(1, 1);
    EXPECT_THROW(perlin_field(0, 10, 2, 0.5, 16, rng), DimensionError);
}

TEST(Grf, Standardized) {
    SeededRng rng(2, 2);
    const auto f = gaussian_random_field(512, 512, 10, rng);
    EXPECT_NEAR(field_mean(f), 0.0, 0.02);
    EXPECT_NEAR(field_var(f), 1.0, 0.05);
}

TEST(Grf, AutocovarianceFollowsGaussianConvolution) {
    // White noise convolved with a Gaussian of sd L: correlation exp(-tau^2 / (4 L^2)).
    SeededRng rng(3, 3);
    const double L = 20;
    const auto f = gaussian_random_field(512, 512, L, rng);
    const int lag = 20;
    double s = 0;
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) s += f(x, y) * f((x + lag) % 512, y);
    const double rho = s / (512.0 * 512.0) / field_var(f);
    EXPECT_NEAR(rho, std::exp(-double(lag * lag) / (4 * L * L)), 0.1);
}

TEST(Grf, DeterministicAndValidated) {
    SeededRng a(4, 4), b(4, 4), c(4, 4);
    EXPECT_EQ(gaussian_random_field(64, 64, 5, a), gaussian_random_field(64, 64, 5, b));
    EXPECT_THROW(gaussian_random_field(64, 64, 40, c), ParameterError);
}

TEST(Gabor, BankSizeAndZeroDc) {
    const auto bank = gabor_bank(8, 4);
    ASSERT_EQ(bank.size(), 32u);
    const ScalarField flat(64, 64, 0.7);
    for (const auto& k : bank) {
        double s = 0;
        for (double v : k.taps.values()) s += v;
        EXPECT_NEAR(s, 0.0, 1e-12);
        const auto r = gabor_response(flat, k);
        for (double v : r.values()) ASSERT_NEAR(v, 0.0, 1e-9);
    }
}

TEST(Gabor, TextureDeterministicInUnitRange) {
    SeededRng a(6, 6), b(6, 6);
    const auto t = gabor_texture(64, 64, 8, 4, a);
    EXPECT_EQ(t, gabor_texture(64, 64, 8, 4, b));
    for (double v : t.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(Fbm, SlopeMatchesIndependentPsd) {
    // Naive DFT oracle, no window, mid band.
    for (double h : {0.5, 0.7}) {
        double mean_slope = 0;
        const int trials = 4;
        for (int s = 0; s < trials; ++s) {
            SeededRng rng(100 + s, 7);
            mean_slope += oracle::naive_psd_slope(fbm_field(64, 64, h, rng), 4, 28) / trials;
        }
        EXPECT_NEAR(mean_slope, 2 * h + 2, 0.2) << "H=" << h;
    }
}

TEST(Fbm, RejectsNonDyadic) {
    SeededRng rng(1, 1);
    EXPECT_THROW(fbm_field(100, 64, 0.7, rng), DimensionError);
    EXPECT_THROW(fbm_field(64, 64, 1.2, rng), ParameterError);
}

TEST(Fields, StandardizeRejectsConstant) {
    ScalarField f(8, 8, 3.0);
    EXPECT_THROW(standardize(f), DegenerateError);
}

TEST(Rng, DeriveStreamIsStableAndDistinct) {
    EXPECT_EQ(derive_stream(7, 3), derive_stream(7, 3));
    EXPECT_NE(derive_stream(7, 3), derive_stream(7, 4));
    EXPECT_NE(derive_stream(7, 3), derive_stream(8, 3));
    SeededRng a(1, 2);
    auto c1 = a.derive(1), c2 = a.derive(2);
    EXPECT_NE(c1.next_u64(), c2.next_u64());
}

TEST(Rng, DistributionMoments) {
    SeededRng rng(9, 9);
    const int n = 200000;
    double sn = 0, sn2 = 0, sg = 0, sb = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sn += z, sn2 += z * z;
        sg += rng.gamma(2.0, 0.15);
        sb += rng.beta(2.0, 5.0);
    }
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.01);
    EXPECT_NEAR(sg / n, 0.3, 0.003);
    EXPECT_NEAR(sb / n, 2.0 / 7.0, 0.003);
}
