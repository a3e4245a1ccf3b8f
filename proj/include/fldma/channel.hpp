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

#ifndef FLDMA_CHANNEL_HPP
#define FLDMA_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fldma/array.hpp"
#include "fldma/common.hpp"
#include "fldma/waveform.hpp"

namespace fldma
{
    // Rician multipath channel of one UE. paths[0] is the LoS ray at
    // ue_location; total average path power is one.
    struct UeChannel
    {
        PolarLocation ue_location;
        std::vector<Path> paths;
        double rician_kappa = 0.0;
    };

    enum class PrecoderKind
    {
        mmse,
        zf
    };

    std::string to_string(PrecoderKind kind);
    PrecoderKind precoder_from_string(const std::string &name);

    // Full experiment description. Defaults follow the reference setup:
    // 30 GHz carrier, 15 kHz spacing, 512 subcarriers, 1/4 CP, 128-element
    // ULA, 3 km sector.
    struct Scenario
    {
        ArrayGeometry geometry = ArrayGeometry::half_wavelength(128, 30e9);
        OfdmGrid grid{512, 15e3, 128};
        OffsetScheme scheme = OffsetScheme::symmetric_random_permutation;
        double rho_max = 30.0;
        arma::uword num_ues = 2;
        double theta_max_rad = deg_to_rad(60.0);
        double r_max_m = 3000.0;
        arma::uword num_nlos_paths = 0;
        double rician_kappa = 0.0;
        double snr_db = 20.0;
        PrecoderKind precoder = PrecoderKind::mmse;
        arma::uword trials = 10000;
        std::uint64_t seed = 1;
        // spectral-overhead accounting for the two-sided symmetric plan;
        // false follows the rate formula verbatim
        bool double_overhead_for_symmetric = false;

        double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
        double overhead_rho() const;
        double plan_delta_f_hz() const;
        OffsetPlan make_plan(std::uint64_t plan_seed) const;

        // Rejects sectors beyond CP coverage or spanning more than one
        // distance period of the plan.
        void validate() const;
    };

    // K locations uniform over the sector: theta ~ U[-theta_max, theta_max],
    // R ~ U(0, r_max]. theta_max = 0 is the collinear case and is legal.
    std::vector<PolarLocation> place_ues(arma::uword num_ues, double theta_max_rad,
                                         double r_max_m, std::uint64_t seed);

    // LoS magnitude sqrt(kappa/(kappa+1)) with uniform phase; num_paths NLoS
    // rays with i.i.d. CN(0, 1/((kappa+1) P)) gains, angles uniform in the
    // sector and distances uniform in [loc.R, r_max]. num_paths = 0 collapses
    // to a pure LoS ray of unit magnitude.
    UeChannel generate_multipath(const PolarLocation &loc, arma::uword num_paths, double kappa,
                                 double theta_max_rad, double r_max_m, std::uint64_t seed);

    // Reduced single-antenna-UE channel: h = sum_p gain_p a_bb(R_p, theta_p)
    cx_vec channel_vector(const UeChannel &ue, const OffsetPlan &plan);

    // Rows h_k^T stacked into a K x M matrix
    cx_mat channel_matrix(const std::vector<UeChannel> &ues, const OffsetPlan &plan);

    // Full space-frequency channel operator (N_us N_rx x N_us M), the matrix
    // whose action on a vectorized frame (antenna-major, subcarrier-minor)
    // reproduces the sampled pipeline. Materialized only for small
    // numerologies; max_dim caps N_us * max(M, N_rx).
    cx_mat space_frequency_matrix(const UeChannel &ue, const OffsetPlan &plan,
                                  const OfdmGrid &grid, arma::uword num_rx,
                                  arma::uword max_dim = 2048);

    // ICI-free target channel b(phi) a_bb^T(R, theta) (x) I_Nus of a LoS ray
    cx_mat ideal_channel(const Path &los, const OffsetPlan &plan, const OfdmGrid &grid,
                         arma::uword num_rx);

} // namespace fldma

#endif
