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

#ifndef FLDMA_ARRAY_HPP
#define FLDMA_ARRAY_HPP

#include <cstdint>
#include <string>

#include "fldma/common.hpp"

namespace fldma
{
    // Far-field polar coordinate relative to the array reference element
    struct PolarLocation
    {
        double distance_m = 0.0; // R >= 0
        double angle_rad = 0.0;  // theta in [-pi/2, pi/2]
    };

    // One propagation ray. gain is the complex path gain including the
    // carrier phase term; paths[0] of a UE channel is the line-of-sight ray.
    struct Path
    {
        cx_double gain{0.0, 0.0};
        double distance_m = 0.0;
        double aod_rad = 0.0;
        double aoa_rad = 0.0;
    };

    // Uniform linear array description
    struct ArrayGeometry
    {
        arma::uword num_elements = 1;
        double carrier_freq_hz = 0.0;
        double element_spacing_m = 0.0;

        // Half-wavelength spacing d = c / (2 f_c)
        static ArrayGeometry half_wavelength(arma::uword num_elements, double carrier_freq_hz);
    };

    enum class OffsetScheme
    {
        zero,                        // phased array, all offsets 0
        uniform_increasing,          // m * delta_f
        logarithmic,                 // (M-1) ln(m+1) delta_f / ln(M)
        random_permutation,          // shuffled {0..M-1} * delta_f
        symmetric_random_permutation // shuffled {-(M-1)/2..(M-1)/2} * delta_f
    };

    std::string to_string(OffsetScheme scheme);
    OffsetScheme offset_scheme_from_string(const std::string &name);

    // Per-antenna frequency offset plan. Regenerates bit-identically from
    // (scheme, M, delta_f, seed).
    struct OffsetPlan
    {
        OffsetScheme scheme = OffsetScheme::zero;
        double delta_f_hz = 0.0; // basic frequency increment cell
        double rho_max = 0.0;    // max |offset| / subcarrier spacing; 0 when spacing was not supplied
        arma::vec offsets_hz;    // delta_f_m, length M
        arma::vec permutation;   // z_m for permutation schemes (half-integers under symmetric, even M)
        std::uint64_t seed = 0;

        arma::uword size() const { return offsets_hz.n_elem; }
    };

    // Build a plan from the basic increment cell directly.
    OffsetPlan generate_offsets(OffsetScheme scheme, arma::uword num_elements,
                                double delta_f_hz, std::uint64_t seed);

    // Build a plan from the offset-to-spacing ratio rho_max; the increment
    // cell is rho_max * spacing / (M-1) one-sided, doubled for the symmetric
    // scheme whose sequence spans both signs.
    OffsetPlan generate_offsets_rho(OffsetScheme scheme, arma::uword num_elements,
                                    double rho_max, double subcarrier_spacing_hz,
                                    std::uint64_t seed);

    // Sa_N(x) = sin(pi N x) / (N sin(pi x)); returns the analytic limit
    // (-1)^((N-1)x) at integer x where the ratio is 0/0.
    double sa(arma::sword n, double x);

    // Transmit steering vector at observation time t:
    // entry m = exp{j 2 pi (m sin(theta)/2 + delta_f_m (t - R/c))} / sqrt(M)
    cx_vec steering_tx(const OffsetPlan &plan, const PolarLocation &loc, double time_s);

    // Equivalent baseband steering vector (matched filters strip the time ramp):
    // entry m = exp{j 2 pi (m sin(theta)/2 - delta_f_m R/c)} / sqrt(M)
    cx_vec steering_tx_baseband(const OffsetPlan &plan, const PolarLocation &loc);

    // Receive-side phased-array steering vector, entry n = exp{j pi n sin(phi)} / sqrt(N)
    cx_vec steering_rx(double aoa_rad, arma::uword num_rx);

    // Beam correlation eta = a^H b; |eta| <= 1 for unit-norm inputs
    cx_double correlation(const cx_vec &a, const cx_vec &b);

    // Permutation-ensemble moments of the beam correlation as functions of
    // p = (sin(theta_i) - sin(theta_j))/2 and q = delta_f (R_i - R_j)/c,
    // oriented as eta(p, q) = (1/M) sum_m exp{j 2 pi (m p - z_m q)}.
    cx_double correlation_mean(double p, double q, arma::uword num_elements);
    double correlation_var(double p, double q, arma::uword num_elements);

    // Second moment E[|eta|^2] = 1/M + M/(M-1) (Sa^2(p) - 1/M)(Sa^2(q) - 1/M)
    double correlation_sq_approx(double p, double q, arma::uword num_elements);

    // |correlation| of the baseband steering vector at the focus against every
    // grid location; entry (i, j) corresponds to (r_grid[i], theta_grid[j]).
    arma::mat beampattern(const OffsetPlan &plan, const PolarLocation &focus,
                          const arma::vec &r_grid_m, const arma::vec &theta_grid_rad);

} // namespace fldma

#endif
