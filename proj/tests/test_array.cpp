// SPDX-License-Identifier: Apache-2.0
//
// fldma-sim: link-level simulator for FDA-MIMO-OFDM location division
// multiple access in the far field.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fldma/array.hpp"
#include "fldma/rng.hpp"

using namespace fldma;

namespace
{
    // Exhaustive two-element permutation ensemble of
    // eta(p, q) = (1/2) sum_m e^{j 2 pi (m p - z_m q)}; the independent oracle
    // for the closed-form moments at M = 2.
    struct TwoElementEnsemble
    {
        cx_double mean;
        double variance;
    };

    TwoElementEnsemble enumerate_m2(double p, double q)
    {
        const cx_double eta_a = 0.5 * (std::polar(1.0, two_pi * (0.0 * p - 0.0 * q)) +
                                       std::polar(1.0, two_pi * (1.0 * p - 1.0 * q)));
        const cx_double eta_b = 0.5 * (std::polar(1.0, two_pi * (0.0 * p - 1.0 * q)) +
                                       std::polar(1.0, two_pi * (1.0 * p - 0.0 * q)));
        const cx_double mean = 0.5 * (eta_a + eta_b);
        // population variance over the two equally likely permutations
        const double var = 0.5 * (std::norm(eta_a - mean) + std::norm(eta_b - mean));
        return {mean, var};
    }
} // namespace

TEST_CASE("sa: limits, zeros and the high-precision pinned value")
{
    CHECK(sa(8, 0.0) == 1.0);
    CHECK(std::abs(sa(4, 0.25)) < 1e-15); // sin(pi) = 0, denominator nonzero
    // direct evaluation of sin(256 pi/512)/(256 sin(pi/512)) at 40 digits
    CHECK(sa(256, 1.0 / 512.0) == doctest::Approx(0.63662376712676322586).epsilon(1e-14));

    // removable singularities: (-1)^{(N-1)x}
    CHECK(sa(4, 1.0) == -1.0);
    CHECK(sa(5, 1.0) == 1.0);
    CHECK(sa(4, -1.0) == -1.0);
    CHECK(sa(4, 2.0) == 1.0);
    CHECK(sa(3, 7.0) == 1.0);

    // period 2 in x
    for (const double x : {0.013, 0.37, 0.49})
        CHECK(sa(16, x + 2.0) == doctest::Approx(sa(16, x)).epsilon(1e-12));

    CHECK_THROWS_AS(sa(0, 0.1), std::invalid_argument);
}

TEST_CASE("half-wavelength geometry")
{
    const auto g = ArrayGeometry::half_wavelength(128, 30e9);
    CHECK(g.element_spacing_m == doctest::Approx(0.0049965409).epsilon(1e-6));
    CHECK_THROWS_AS(ArrayGeometry::half_wavelength(0, 30e9), std::invalid_argument);
    CHECK_THROWS_AS(ArrayGeometry::half_wavelength(4, 0.0), std::invalid_argument);
}

TEST_CASE("generate_offsets: scheme definitions")
{
    SUBCASE("uniform increasing")
    {
        const auto plan = generate_offsets(OffsetScheme::uniform_increasing, 4, 3e3, 0);
        const arma::vec expected{0.0, 3e3, 6e3, 9e3};
        CHECK(arma::approx_equal(plan.offsets_hz, expected, "absdiff", 1e-12));
    }
    SUBCASE("zero plan")
    {
        const auto plan = generate_offsets(OffsetScheme::zero, 128, 3e3, 7);
        CHECK(plan.size() == 128);
        CHECK(arma::norm(plan.offsets_hz) == 0.0);
    }
    SUBCASE("logarithmic")
    {
        const arma::uword m = 8;
        const auto plan = generate_offsets(OffsetScheme::logarithmic, m, 3e3, 0);
        for (arma::uword i = 0; i < m; i++)
            CHECK(plan.offsets_hz(i) ==
                  doctest::Approx(7.0 * std::log(double(i + 1)) * 3e3 / std::log(8.0)));
        // same maximum offset as the uniform plan
        CHECK(plan.offsets_hz(m - 1) == doctest::Approx(7.0 * 3e3));
    }
    SUBCASE("random permutation is a permutation and regenerates bit-identically")
    {
        const auto a = generate_offsets(OffsetScheme::random_permutation, 256, 3e3, 42);
        const auto b = generate_offsets(OffsetScheme::random_permutation, 256, 3e3, 42);
        CHECK(arma::all(a.offsets_hz == b.offsets_hz)); // bit-identical replay
        arma::vec sorted = arma::sort(a.permutation);
        for (arma::uword i = 0; i < 256; i++)
            CHECK(sorted(i) == double(i));
        const auto c = generate_offsets(OffsetScheme::random_permutation, 256, 3e3, 43);
        CHECK(arma::any(a.offsets_hz != c.offsets_hz));
    }
    SUBCASE("symmetric sequence, odd and even element counts")
    {
        const auto odd = generate_offsets(OffsetScheme::symmetric_random_permutation, 5, 1e3, 3);
        CHECK(arma::sort(odd.permutation)(0) == -2.0);
        CHECK(arma::sort(odd.permutation)(4) == 2.0);
        CHECK(arma::sum(odd.permutation) == 0.0);
        // even M runs on half-integers
        const auto even = generate_offsets(OffsetScheme::symmetric_random_permutation, 4, 1e3, 3);
        CHECK(arma::sort(even.permutation)(0) == -1.5);
        CHECK(arma::sort(even.permutation)(3) == 1.5);
    }
}

TEST_CASE("generate_offsets_rho derives the increment cell")
{
    const double spacing = 15e3;
    SUBCASE("one-sided plan: delta_f = rho_max spacing/(M-1)")
    {
        const auto plan =
            generate_offsets_rho(OffsetScheme::random_permutation, 128, 30.0, spacing, 1);
        CHECK(plan.delta_f_hz == doctest::Approx(30.0 * spacing / 127.0));
        CHECK(plan.rho_max == 30.0);
        CHECK(arma::abs(plan.offsets_hz).max() == doctest::Approx(30.0 * spacing));
    }
    SUBCASE("symmetric plan: delta_f = 2 rho_max spacing/(M-1)")
    {
        const auto plan = generate_offsets_rho(OffsetScheme::symmetric_random_permutation, 128,
                                               30.0, spacing, 1);
        CHECK(plan.delta_f_hz == doctest::Approx(2.0 * 30.0 * spacing / 127.0));
        CHECK(arma::abs(plan.offsets_hz).max() == doctest::Approx(30.0 * spacing));
    }
    SUBCASE("single element rejects the symmetric derivation")
    {
        CHECK_THROWS_AS(generate_offsets_rho(OffsetScheme::symmetric_random_permutation, 1, 30.0,
                                             spacing, 1),
                        precondition_error);
    }
}

TEST_CASE("steering vectors")
{
    SUBCASE("zero plan at boresight is the constant vector")
    {
        const auto plan = generate_offsets(OffsetScheme::zero, 8, 0.0, 0);
        const auto a = steering_tx(plan, {1234.5, 0.0}, 1e-3);
        for (const auto &v : a)
            CHECK(std::abs(v - cx_double(1.0 / std::sqrt(8.0), 0.0)) < 1e-15);
    }
    SUBCASE("offset phase cancels at t = R/c")
    {
        const auto plan = generate_offsets(OffsetScheme::random_permutation, 16, 7e3, 5);
        const PolarLocation loc{2500.0, deg_to_rad(17.0)};
        const auto a = steering_tx(plan, loc, loc.distance_m / speed_of_light);
        const double scale = 1.0 / 4.0;
        for (arma::uword m = 0; m < 16; m++)
        {
            const auto expected = std::polar(scale, pi * double(m) * std::sin(loc.angle_rad));
            CHECK(std::abs(a(m) - expected) < 1e-12);
        }
    }
    SUBCASE("hand-evaluated two-element phase")
    {
        const auto plan = generate_offsets(OffsetScheme::uniform_increasing, 2, 1e3, 0);
        const auto a = steering_tx(plan, {speed_of_light / 4000.0, 0.0}, 0.0);
        const double s = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(a(0) - cx_double(s, 0.0)) < 1e-12);
        CHECK(std::abs(a(1) - s * std::polar(1.0, -pi / 2.0)) < 1e-12);
    }
    SUBCASE("unit norm across random plans, locations and times")
    {
        Rng rng(99);
        for (int i = 0; i < 50; i++)
        {
            const auto plan = generate_offsets(OffsetScheme::random_permutation, 64,
                                               rng.uniform(0.0, 20e3), rng.next_u64());
            const PolarLocation loc{rng.uniform(0.0, 5000.0), rng.uniform(-1.5, 1.5)};
            const auto a = steering_tx(plan, loc, rng.uniform(0.0, 1e-4));
            CHECK(std::abs(arma::norm(a) - 1.0) < 1e-12);
        }
    }
    SUBCASE("baseband form")
    {
        const auto plan = generate_offsets(OffsetScheme::random_permutation, 32, 3e3, 11);
        const PolarLocation loc{1800.0, deg_to_rad(-25.0)};
        // equals the time-domain form at t = 0
        const auto bb = steering_tx_baseband(plan, loc);
        const auto t0 = steering_tx(plan, loc, 0.0);
        CHECK(arma::norm(bb - t0) == 0.0);
        // R = 0 reduces to the phased-array vector
        const auto pa = steering_tx_baseband(plan, {0.0, loc.angle_rad});
        for (arma::uword m = 0; m < 32; m++)
            CHECK(std::abs(pa(m) - std::polar(1.0 / std::sqrt(32.0),
                                              pi * double(m) * std::sin(loc.angle_rad))) < 1e-12);
    }
    SUBCASE("receive-side phased array")
    {
        const auto b0 = steering_rx(0.0, 4);
        for (const auto &v : b0)
            CHECK(std::abs(v - cx_double(0.5, 0.0)) < 1e-15);
        const auto b1 = steering_rx(0.3, 1);
        CHECK(b1.n_elem == 1);
        CHECK(std::abs(b1(0) - cx_double(1.0, 0.0)) < 1e-15);
        const auto b2 = steering_rx(pi / 6.0, 2);
        CHECK(std::abs(b2(0) - cx_double(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
        CHECK(std::abs(b2(1) - std::polar(1.0 / std::sqrt(2.0), pi / 4.0)) < 1e-12);
    }
}

TEST_CASE("correlation against the uniform-offset closed form")
{
    SUBCASE("self and orthogonal")
    {
        const auto plan = generate_offsets(OffsetScheme::random_permutation, 16, 5e3, 2);
        const auto a = steering_tx_baseband(plan, {1000.0, 0.2});
        CHECK(std::abs(correlation(a, a) - cx_double(1.0, 0.0)) < 1e-12);

        cx_vec e1(4, arma::fill::zeros), e2(4, arma::fill::zeros);
        e1(0) = 1.0;
        e2(2) = 1.0;
        CHECK(std::abs(correlation(e1, e2)) == 0.0);
        CHECK_THROWS_AS(correlation(e1, cx_vec(3)), std::invalid_argument);
    }
    SUBCASE("|eta| equals the Sa_M kernel for uniformly increasing offsets")
    {
        const arma::uword m = 64;
        const double delta_f = 3e3;
        const auto plan = generate_offsets(OffsetScheme::uniform_increasing, m, delta_f, 0);
        Rng rng(4);
        for (int i = 0; i < 40; i++)
        {
            const PolarLocation li{rng.uniform(0.0, 20e3), rng.uniform(-1.2, 1.2)};
            const PolarLocation lj{rng.uniform(0.0, 20e3), rng.uniform(-1.2, 1.2)};
            const double u = (std::sin(li.angle_rad) - std::sin(lj.angle_rad)) / 2.0 -
                             delta_f * (li.distance_m - lj.distance_m) / speed_of_light;
            const auto eta = correlation(steering_tx_baseband(plan, li),
                                         steering_tx_baseband(plan, lj));
            CHECK(std::abs(std::abs(eta) - std::abs(sa(m, u))) < 1e-12);
        }
    }
    SUBCASE("zero-offset correlation ignores distance bit-for-bit")
    {
        const auto plan = generate_offsets(OffsetScheme::zero, 32, 0.0, 0);
        const double theta_i = 0.31, theta_j = -0.12;
        const auto ref = correlation(steering_tx_baseband(plan, {100.0, theta_i}),
                                     steering_tx_baseband(plan, {200.0, theta_j}));
        const auto moved = correlation(steering_tx_baseband(plan, {4321.0, theta_i}),
                                       steering_tx_baseband(plan, {87.0, theta_j}));
        CHECK(ref.real() == moved.real());
        CHECK(ref.imag() == moved.imag());
    }
}

TEST_CASE("correlation moments against the exhaustive two-element ensemble")
{
    // closed forms must match a brute-force average over both permutations
    for (const auto [p, q] : std::vector<std::pair<double, double>>{
             {0.1, 0.2}, {0.0, 0.5}, {0.37, -0.21}, {-0.4, 0.05}})
    {
        const auto exact = enumerate_m2(p, q);
        const auto mean = correlation_mean(p, q, 2);
        CHECK(std::abs(mean - exact.mean) < 1e-12);
        CHECK(correlation_var(p, q, 2) == doctest::Approx(exact.variance).epsilon(1e-12));
        CHECK(correlation_sq_approx(p, q, 2) ==
              doctest::Approx(exact.variance + std::norm(exact.mean)).epsilon(1e-12));
    }

    SUBCASE("trivial points")
    {
        CHECK(std::abs(correlation_mean(0.0, 0.0, 8) - cx_double(1.0, 0.0)) < 1e-15);
        CHECK(std::abs(correlation_mean(0.0, 0.5, 2)) < 1e-15); // Sa_2(1/2) = 0
        CHECK(correlation_var(0.0, 0.0, 128) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(correlation_sq_approx(0.0, 0.0, 64) == doctest::Approx(1.0));
    }

    SUBCASE("second moment identity: E|eta|^2 = Var + |E eta|^2")
    {
        Rng rng(8);
        for (int i = 0; i < 30; i++)
        {
            const double p = rng.uniform(-0.5, 0.5);
            const double q = rng.uniform(-0.5, 0.5);
            const arma::uword m = 4 + rng.uniform_below(60);
            CHECK(correlation_sq_approx(p, q, m) ==
                  doctest::Approx(correlation_var(p, q, m) +
                                  std::norm(correlation_mean(p, q, m)))
                      .epsilon(1e-10));
        }
    }

    SUBCASE("off-peak variance approaches 1/M")
    {
        const arma::uword m = 512;
        CHECK(correlation_var(0.013, 0.029, m) == doctest::Approx(1.0 / double(m)).epsilon(0.05));
    }

    SUBCASE("second term vanishes where Sa^2(q) crosses 1/M")
    {
        const arma::uword m = 32;
        double lo = 0.0, hi = 1.0 / double(m); // Sa^2 falls from 1 to 0 here
        for (int i = 0; i < 200; i++)
        {
            const double mid = (lo + hi) / 2.0;
            (sa(m, mid) * sa(m, mid) > 1.0 / double(m) ? lo : hi) = mid;
        }
        CHECK(correlation_sq_approx(0.0, (lo + hi) / 2.0, m) ==
              doctest::Approx(1.0 / double(m)).epsilon(1e-9));
    }

    SUBCASE("asymptotic orthogonality: decreasing in M for fixed off-peak point")
    {
        const double p = 0.043, q = 0.037;
        double prev = correlation_sq_approx(p, q, 32);
        for (const arma::uword m : {64, 128, 256, 512})
        {
            const double cur = correlation_sq_approx(p, q, m);
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(prev < 0.01);
    }
}

TEST_CASE("beampattern")
{
    SUBCASE("phased array is distance-blind")
    {
        const auto plan = generate_offsets(OffsetScheme::zero, 32, 0.0, 0);
        const arma::vec r = arma::linspace(0.0, 3000.0, 7);
        const arma::vec th = arma::linspace(-0.5, 0.5, 9);
        const auto pat = beampattern(plan, {1500.0, 0.1}, r, th);
        for (arma::uword j = 0; j < th.n_elem; j++)
            for (arma::uword i = 1; i < r.n_elem; i++)
                CHECK(pat(i, j) == doctest::Approx(pat(0, j)).epsilon(1e-12));
    }
    SUBCASE("uniform offsets peak exactly on the coupling locus")
    {
        const arma::uword m = 64;
        const double delta_f = 3e3;
        const auto plan = generate_offsets(OffsetScheme::uniform_increasing, m, delta_f, 0);
        const PolarLocation focus{1000.0, 0.0};
        // pick (R, theta) with (sin t - sin t0)/2 - delta_f (R - R0)/c = 1
        const double theta = 0.3;
        const double r = focus.distance_m +
                         (std::sin(theta) / 2.0 - 1.0) * speed_of_light / delta_f;
        const auto pat = beampattern(plan, focus, arma::vec{r}, arma::vec{theta});
        CHECK(pat(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("focus point evaluates to one, permutation plan is R-periodic")
    {
        const auto plan = generate_offsets(OffsetScheme::random_permutation, 64, 3e3, 21);
        const PolarLocation focus{800.0, 0.05};
        const double period = speed_of_light / plan.delta_f_hz;
        const arma::vec r{100.0, 800.0, 1900.0};
        const arma::vec th{-0.2, 0.05, 0.4};
        const auto base = beampattern(plan, focus, r, th);
        CHECK(base(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        const auto shifted = beampattern(plan, focus, r + period, th);
        for (arma::uword i = 0; i < r.n_elem; i++)
            for (arma::uword j = 0; j < th.n_elem; j++)
                CHECK(std::abs(shifted(i, j) - base(i, j)) < 1e-9);
    }
    SUBCASE("empty grid rejected")
    {
        const auto plan = generate_offsets(OffsetScheme::zero, 4, 0.0, 0);
        CHECK_THROWS_AS(beampattern(plan, {0.0, 0.0}, arma::vec{}, arma::vec{0.0}),
                        std::invalid_argument);
    }
}
