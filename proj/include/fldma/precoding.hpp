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

#ifndef FLDMA_PRECODING_HPP
#define FLDMA_PRECODING_HPP

#include "fldma/common.hpp"

namespace fldma
{
    // Reduced downlink MU-MIMO channel: row k of h is the 1 x M channel of
    // single-antenna UE k; snr_linear is the per-UE SNR gamma under equal
    // power allocation (noise variance 1/gamma).
    struct MuMimoChannel
    {
        MuMimoChannel(cx_mat h_, double snr_linear_);

        cx_mat h;
        double snr_linear;

        arma::uword num_ues() const { return h.n_rows; }
        arma::uword num_antennas() const { return h.n_cols; }
    };

    // Regularized inverse W = H^H (H H^H + I/gamma)^{-1}; columns unnormalized
    cx_mat mmse_precoder_raw(const MuMimoChannel &ch);

    // Right inverse W = H^H (H H^H)^{-1}; columns unnormalized
    cx_mat zf_precoder_raw(const MuMimoChannel &ch);

    // Same precoders with every column scaled to unit norm
    cx_mat mmse_precoder(const MuMimoChannel &ch);
    cx_mat zf_precoder(const MuMimoChannel &ch);

    cx_mat normalize_columns(cx_mat w);

    // Global scaling to a transmit sum-power budget ||W||_F^2 = total_power
    cx_mat scale_to_sum_power(cx_mat w, double total_power);

    // P = H^H (H H^H)^{-1} H_ideal so that H P = H_ideal; solved, never
    // explicitly inverted. Rank-deficient H is reported together with a
    // condition estimate of H H^H.
    cx_mat pre_equalizer(const cx_mat &h_actual, const cx_mat &h_ideal);

    // SINR_k = gamma / [(H H^H + I/gamma)^{-1}]_{kk} - 1, one entry per UE
    arma::vec sinr_closed_form(const MuMimoChannel &ch);

    // SINR_k = |a_k h_k^T w_k|^2 / (sum_{i != k} |a_i h_k^T w_i|^2 + noise_var)
    arma::vec sinr_general(const cx_mat &h, const cx_mat &w, const arma::vec &power,
                           double noise_var);

    // R = N_us/(N_us + rho_max) * sum_k log2(1 + SINR_k)  [bits/s/Hz]
    double spectral_efficiency(const arma::vec &sinrs, arma::uword num_subcarriers,
                               double rho_max);

} // namespace fldma

#endif
