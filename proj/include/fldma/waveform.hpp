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

#ifndef FLDMA_WAVEFORM_HPP
#define FLDMA_WAVEFORM_HPP

#include <vector>

#include "fldma/array.hpp"
#include "fldma/common.hpp"

namespace fldma
{
    class Rng;

    // OFDM numerology. One OFDM symbol per frame is modeled; block fading
    // makes longer frames a plain repetition.
    struct OfdmGrid
    {
        OfdmGrid(arma::uword num_subcarriers, double subcarrier_spacing_hz, arma::uword cp_samples);

        arma::uword num_subcarriers;
        double subcarrier_spacing_hz;
        arma::uword cp_samples;

        double symbol_duration_s() const { return 1.0 / subcarrier_spacing_hz; }
        double cp_duration_s() const
        {
            return static_cast<double>(cp_samples) * symbol_duration_s() / static_cast<double>(num_subcarriers);
        }
        double sample_interval_s() const { return symbol_duration_s() / static_cast<double>(num_subcarriers); }
        arma::uword frame_samples() const { return cp_samples + num_subcarriers; }

        // CP retention covers propagation delays up to the CP duration
        double max_propagation_distance_m() const { return speed_of_light * cp_duration_s(); }
    };

    // Unit-power QPSK symbols, one column per transmit antenna
    cx_mat random_qpsk_frame(const OfdmGrid &grid, arma::uword num_tx, Rng &rng);

    // Matched-filter leakage coefficients for the frequency offset ratios
    // rho_m = delta_f_m / spacing:
    //   alpha_m        = Sa_N(rho_m/N) e^{j pi rho_m (N-1)/N}
    //   beta_{l,l',m}  = Sa_N((l-l'+rho_m)/N) e^{j pi (l-l'+rho_m)(N-1)/N}
    cx_double ici_alpha(double rho, arma::uword num_subcarriers);
    cx_double ici_beta(arma::sword l, arma::sword l_prime, double rho, arma::uword num_subcarriers);

    struct IciCoefficients
    {
        cx_vec alpha;       // over antennas
        arma::cx_cube beta; // (l, l', antenna)
    };

    // Materializes the full beta cube; rejects N^2 M above max_entries
    // (use the scalar ici_beta for large numerologies).
    IciCoefficients ici_coefficients(const OffsetPlan &plan, const OfdmGrid &grid,
                                     arma::uword max_entries = arma::uword(1) << 22);

    // Per-antenna transmit samples on the lattice t_i in [-T_cp, T_us),
    // x_m(t_i) e^{j 2 pi delta_f_m t_i}, rectangular prototype pulse of unit
    // energy under the (1/N) sum convention of the matched filter.
    // Rows are time samples, columns antennas.
    cx_mat modulate(const cx_mat &frame, const OfdmGrid &grid, const OffsetPlan &plan);

    // Samples of the simplified received signal at rx antenna rx_index (of
    // num_rx) on the retained window [0, T_us). Delay phases are evaluated in
    // closed form; no sample quantization. Rejects paths beyond CP coverage.
    cx_vec synthesize_received(const cx_mat &frame, const OfdmGrid &grid, const OffsetPlan &plan,
                               const std::vector<Path> &paths, arma::uword rx_index,
                               arma::uword num_rx);

    // y_{l'} = (1/N) sum_i samples_i e^{-j 2 pi l' i / N}
    cx_vec matched_filter_demod(const cx_vec &samples, const OfdmGrid &grid);

    // Relative deviation ||F Xi F^H - I||_F / ||I||_F aggregated over
    // antennas; 0 for a zero plan, grows with the offset ratios.
    double slight_offset_error(const OffsetPlan &plan, const OfdmGrid &grid);

} // namespace fldma

#endif
