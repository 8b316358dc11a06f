#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "trojanscope/errors.hpp"
#include "trojanscope/kde.hpp"
#include "trojanscope/kde_reference.hpp"

using namespace trojanscope;

namespace {

// Independent evaluation of the bandwidth rule, kept alongside the tests.
double silverman_oracle(std::vector<double> xs) {
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);

    std::sort(xs.begin(), xs.end());
    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        if (lo + 1 >= n) return xs[n - 1];
        return xs[lo] + (xs[lo + 1] - xs[lo]) * (pos - static_cast<double>(lo));
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double h =
        0.9 * std::min(std::sqrt(var), iqr / 1.34) * std::pow(static_cast<double>(n), -0.2);
    if (h == 0.0) return std::max(std::abs(xs.back()), 1.0) * 1e-3;
    return h;
}

}  // namespace

TEST_CASE("silverman bandwidth") {
    SUBCASE("constant sample falls back") {
        const std::vector<double> xs(8, 5.0);
        CHECK(silverman_bandwidth(xs) == doctest::Approx(5.0e-3).epsilon(1e-12));

        const std::vector<double> neg(4, -5.0);
        CHECK(silverman_bandwidth(neg) == doctest::Approx(5.0e-3).epsilon(1e-12));

        const std::vector<double> zeros(4, 0.0);
        CHECK(silverman_bandwidth(zeros) == doctest::Approx(1.0e-3).epsilon(1e-12));
    }
    SUBCASE("two-point sample matches the hand-evaluated formula") {
        const std::vector<double> xs{0.0, 1.0};
        // sd = 0.70711, IQR = 0.5 -> h = 0.9 * (0.5/1.34) * 2^(-1/5)
        const double expected = 0.9 * (0.5 / 1.34) * std::pow(2.0, -0.2);
        CHECK(silverman_bandwidth(xs) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(silverman_bandwidth(xs) == doctest::Approx(0.2923).epsilon(1e-4));
    }
    SUBCASE("positive homogeneity") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto xs = support::normal_sample(40, seed);
            const double c = 0.5 + 7.0 * rng::to_unit(rng::word(seed, 0xC));
            std::vector<double> scaled = xs;
            for (auto& x : scaled) x *= c;
            CHECK(silverman_bandwidth(scaled) ==
                  doctest::Approx(c * silverman_bandwidth(xs)).epsilon(1e-12));
        }
    }
    SUBCASE("oracle agreement on random samples") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto xs = support::mixed_sample(10 + seed * 13, seed + 1);
            CHECK(silverman_bandwidth(xs) ==
                  doctest::Approx(silverman_oracle(xs)).epsilon(1e-12));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)silverman_bandwidth(std::vector<double>{1.0}), ValueError);
        CHECK_THROWS_AS((void)silverman_bandwidth(std::vector<double>{1.0, NAN}), ValueError);
    }
}

TEST_CASE("estimate evaluates the Gaussian sum") {
    KdeConfig cfg;

    SUBCASE("phi(0) identity on a constant pair") {
        cfg.bandwidth = 1.0;
        const std::vector<double> xs{0.0, 0.0};
        const std::vector<double> grid{0.0};
        const auto d = estimate(xs, cfg, grid);
        CHECK(d.density[0] == doctest::Approx(0.3989422804).epsilon(1e-9));
        CHECK(d.bandwidth_used == 1.0);
        CHECK(d.n == 2);
    }
    SUBCASE("two-kernel closed form at the midpoint") {
        cfg.bandwidth = 1.0;
        const std::vector<double> xs{-1.0, 1.0};
        const std::vector<double> grid{0.0};
        const auto d = estimate(xs, cfg, grid);
        CHECK(d.density[0] == doctest::Approx(0.2419707245).epsilon(1e-9));
    }
    SUBCASE("translation equivariance") {
        cfg.bandwidth = std::nullopt;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto xs = support::normal_sample(60, seed);
            const double c = 13.75;
            std::vector<double> shifted = xs;
            for (auto& x : shifted) x += c;

            const auto base = estimate(xs, cfg);
            std::vector<double> grid = base.grid;
            for (auto& g : grid) g += c;
            const auto moved = estimate(shifted, KdeConfig{base.bandwidth_used}, grid);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                CHECK(moved.density[j] == doctest::Approx(base.density[j]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("default grid spans min-3h .. max+3h") {
        const auto xs = support::uniform_sample(50, 3, -2.0, 7.0);
        const auto d = estimate(xs, cfg);
        const double h = d.bandwidth_used;
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        CHECK(d.grid.size() == 512);
        CHECK(d.grid.front() == *lo - 3.0 * h);
        CHECK(d.grid.back() == *hi + 3.0 * h);
        CHECK(d.bandwidth_used == doctest::Approx(silverman_bandwidth(xs)).epsilon(1e-15));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)estimate(std::vector<double>{1.0}, cfg), ValueError);
        const std::vector<double> xs{0.0, 1.0};
        CHECK_THROWS_AS((void)estimate(xs, cfg, std::vector<double>{1.0, 1.0}), ValueError);
        KdeConfig bad;
        bad.grid_points = 4;
        CHECK_THROWS_AS((void)estimate(xs, bad), ValueError);
        bad = KdeConfig{};
        bad.bandwidth = -1.0;
        CHECK_THROWS_AS((void)estimate(xs, bad), ValueError);
    }
}

TEST_CASE("density properties") {
    KdeConfig cfg;

    SUBCASE("normalization and nonnegativity on mixed samples") {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const std::size_t n = 10 + (rng::word(seed, 0xD) % 1991);
            const auto xs = support::mixed_sample(n, seed);
            const auto d = estimate(xs, cfg);
            for (double v : d.density) CHECK(v >= 0.0);
            const double integral = support::trapezoid(d.grid, d.density);
            CHECK(integral >= 0.98);
            CHECK(integral <= 1.001);
        }
    }
    SUBCASE("mirror symmetry") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto xs = support::mixed_sample(80, seed);
            const auto d = estimate(xs, cfg);

            std::vector<double> neg_xs(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) neg_xs[i] = -xs[i];
            std::vector<double> neg_grid(d.grid.rbegin(), d.grid.rend());
            for (auto& g : neg_grid) g = -g;

            const auto mirrored = estimate(neg_xs, KdeConfig{d.bandwidth_used}, neg_grid);
            const std::size_t m = d.grid.size();
            for (std::size_t j = 0; j < m; ++j) {
                CHECK(mirrored.density[j] ==
                      doctest::Approx(d.density[m - 1 - j]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("larger bandwidth strictly lowers the peak") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto xs = support::normal_sample(50, seed, 0.0, 2.0);
            const double h0 = silverman_bandwidth(xs);
            const auto grid = estimate(xs, cfg).grid;

            double prev_peak = std::numeric_limits<double>::infinity();
            for (double factor : {1.0, 1.5, 2.25, 4.0}) {
                const auto d = estimate(xs, KdeConfig{h0 * factor}, grid);
                const double peak = *std::max_element(d.density.begin(), d.density.end());
                CHECK(peak < prev_peak);
                prev_peak = peak;
            }
        }
    }
    SUBCASE("parallel kernel matches both serial oracles for n <= 50") {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const std::size_t n = 2 + (rng::word(seed, 0xE) % 49);
            const auto xs = support::mixed_sample(n, seed);
            const auto d = estimate(xs, cfg);

            const auto ref = reference::parzen_serial(xs, d.bandwidth_used, d.grid);
            const auto oracle = support::kde_oracle(xs, d.bandwidth_used, d.grid);
            for (std::size_t j = 0; j < d.grid.size(); ++j) {
                CHECK(d.density[j] == doctest::Approx(ref[j]).epsilon(1e-12));
                CHECK(d.density[j] == doctest::Approx(oracle[j]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("shared_grid covers every sample") {
    KdeConfig cfg;

    SUBCASE("two samples") {
        const std::vector<std::vector<double>> samples{{0.0, 1.0}, {2.0, 3.0}};
        const auto grid = shared_grid(samples, cfg);
        const double h_max =
            std::max(silverman_bandwidth(samples[0]), silverman_bandwidth(samples[1]));
        CHECK(grid.size() == 512);
        CHECK(grid.front() == 0.0 - 3.0 * h_max);
        CHECK(grid.back() == 3.0 + 3.0 * h_max);
        for (std::size_t j = 1; j < grid.size(); ++j) CHECK(grid[j] > grid[j - 1]);
    }
    SUBCASE("single sample equals the default estimate grid") {
        const auto xs = support::normal_sample(30, 9);
        const std::vector<std::vector<double>> samples{xs};
        CHECK(shared_grid(samples, cfg) == estimate(xs, cfg).grid);
    }
    SUBCASE("grid length always equals grid_points") {
        cfg.grid_points = 97;
        const std::vector<std::vector<double>> samples{{0.0, 0.1}, {5.0, 9.0}, {-4.0, -2.0}};
        CHECK(shared_grid(samples, cfg).size() == 97);
    }
    SUBCASE("empty list fails") {
        CHECK_THROWS_AS((void)shared_grid({}, cfg), ValueError);
    }
}
