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

#include "fldma/channel.hpp"

#include <cmath>

#include "fldma/rng.hpp"

namespace fldma
{

    std::string to_string(PrecoderKind kind)
    {
        return kind == PrecoderKind::mmse ? "mmse" : "zf";
    }

    PrecoderKind precoder_from_string(const std::string &name)
    {
        if (name == "mmse")
            return PrecoderKind::mmse;
        if (name == "zf")
            return PrecoderKind::zf;
        throw config_error("unknown precoder '" + name + "'");
    }

    double Scenario::overhead_rho() const
    {
        if (scheme == OffsetScheme::zero)
            return 0.0;
        if (scheme == OffsetScheme::symmetric_random_permutation && double_overhead_for_symmetric)
            return 2.0 * rho_max;
        return rho_max;
    }

    double Scenario::plan_delta_f_hz() const
    {
        return make_plan(seed).delta_f_hz;
    }

    OffsetPlan Scenario::make_plan(std::uint64_t plan_seed) const
    {
        return generate_offsets_rho(scheme, geometry.num_elements, rho_max,
                                    grid.subcarrier_spacing_hz, plan_seed);
    }

    void Scenario::validate() const
    {
        if (num_ues < 1)
            throw precondition_error("scenario: need at least one UE");
        if (num_ues > geometry.num_elements)
            throw precondition_error("scenario: more UEs than antennas leaves no right inverse");
        if (theta_max_rad < 0.0 || theta_max_rad > pi / 2.0)
            throw precondition_error("scenario: theta_max must lie in [0, 90] degrees");
        if (r_max_m <= 0.0)
            throw precondition_error("scenario: r_max must be positive");
        if (trials < 1)
            throw precondition_error("scenario: need at least one trial");
        if (rician_kappa < 0.0)
            throw precondition_error("scenario: Rician factor must be non-negative");
        if (r_max_m > grid.max_propagation_distance_m())
            throw precondition_error("scenario: r_max " + std::to_string(r_max_m) +
                                     " m exceeds the CP coverage of " +
                                     std::to_string(grid.max_propagation_distance_m()) + " m");
        const double delta_f = plan_delta_f_hz();
        if (delta_f > 0.0 && r_max_m >= speed_of_light / delta_f)
            throw precondition_error("scenario: r_max spans more than one distance period c/delta_f");
    }

    std::vector<PolarLocation> place_ues(arma::uword num_ues, double theta_max_rad,
                                         double r_max_m, std::uint64_t seed)
    {
        if (num_ues < 1)
            throw std::invalid_argument("place_ues: need at least one UE");
        if (theta_max_rad < 0.0)
            throw std::invalid_argument("place_ues: theta_max must be non-negative");
        if (r_max_m <= 0.0)
            throw std::invalid_argument("place_ues: r_max must be positive");

        Rng rng(seed);
        std::vector<PolarLocation> out(num_ues);
        for (auto &loc : out)
        {
            loc.angle_rad = rng.uniform(-theta_max_rad, theta_max_rad);
            // uniform on (0, r_max]: flip the half-open side of uniform()
            loc.distance_m = r_max_m * (1.0 - rng.uniform());
        }
        return out;
    }

    UeChannel generate_multipath(const PolarLocation &loc, arma::uword num_paths, double kappa,
                                 double theta_max_rad, double r_max_m, std::uint64_t seed)
    {
        if (kappa < 0.0)
            throw std::invalid_argument("generate_multipath: Rician factor must be non-negative");

        Rng rng(seed);
        UeChannel ue;
        ue.ue_location = loc;
        ue.rician_kappa = kappa;

        // kappa -> inf convention when there are no scatterers
        const double los_mag = (num_paths == 0) ? 1.0 : std::sqrt(kappa / (kappa + 1.0));
        ue.paths.push_back({std::polar(los_mag, rng.uniform(0.0, two_pi)),
                            loc.distance_m, loc.angle_rad, loc.angle_rad});

        for (arma::uword p = 0; p < num_paths; p++)
        {
            Path nlos;
            nlos.gain = rng.complex_normal(1.0 / ((kappa + 1.0) * static_cast<double>(num_paths)));
            nlos.distance_m = rng.uniform(loc.distance_m, r_max_m);
            nlos.aod_rad = rng.uniform(-theta_max_rad, theta_max_rad);
            nlos.aoa_rad = rng.uniform(-theta_max_rad, theta_max_rad);
            ue.paths.push_back(nlos);
        }
        return ue;
    }

    cx_vec channel_vector(const UeChannel &ue, const OffsetPlan &plan)
    {
        cx_vec h(plan.size(), arma::fill::zeros);
        for (const Path &p : ue.paths)
            h += p.gain * steering_tx_baseband(plan, {p.distance_m, p.aod_rad});
        return h;
    }

    cx_mat channel_matrix(const std::vector<UeChannel> &ues, const OffsetPlan &plan)
    {
        if (ues.empty())
            throw std::invalid_argument("channel_matrix: no UE channels");
        cx_mat h(ues.size(), plan.size());
        for (arma::uword k = 0; k < ues.size(); k++)
            h.row(k) = channel_vector(ues[k], plan).st();
        return h;
    }

    // Unitary DFT matrix
    static cx_mat dft_matrix(arma::uword n)
    {
        cx_mat f(n, n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (arma::uword a = 0; a < n; a++)
            for (arma::uword b = 0; b < n; b++)
                f(a, b) = std::polar(scale, -two_pi * static_cast<double>(a) *
                                                static_cast<double>(b) / static_cast<double>(n));
        return f;
    }

    cx_mat space_frequency_matrix(const UeChannel &ue, const OffsetPlan &plan,
                                  const OfdmGrid &grid, arma::uword num_rx,
                                  arma::uword max_dim)
    {
        const arma::uword n = grid.num_subcarriers;
        const arma::uword m = plan.size();
        if (n * std::max(m, num_rx) > max_dim)
            throw precondition_error("space_frequency_matrix: N_us*max(M, N_rx) exceeds the cap of " +
                                     std::to_string(max_dim) +
                                     "; use the block-structured pipeline for large numerologies");

        const cx_mat f = dft_matrix(n);
        const cx_mat fh = f.t();

        cx_mat h(n * num_rx, n * m, arma::fill::zeros);
        for (const Path &p : ue.paths)
        {
            const cx_vec a_bb = steering_tx_baseband(plan, {p.distance_m, p.aod_rad});
            const cx_vec b = steering_rx(p.aoa_rad, num_rx);

            cx_vec phi(n);
            for (arma::uword l = 0; l < n; l++)
                phi(l) = std::polar(1.0, -two_pi * static_cast<double>(l) *
                                             grid.subcarrier_spacing_hz * p.distance_m / speed_of_light);

            for (arma::uword am = 0; am < m; am++)
            {
                const double rho = plan.offsets_hz(am) / grid.subcarrier_spacing_hz;
                cx_vec xi(n);
                for (arma::uword i = 0; i < n; i++)
                    xi(i) = std::polar(1.0, two_pi * rho * static_cast<double>(i) /
                                                static_cast<double>(n));
                // F Xi_m F^H Phi_p, shared by every receive antenna
                const cx_mat block = f * arma::diagmat(xi) * fh * arma::diagmat(phi);
                for (arma::uword nr = 0; nr < num_rx; nr++)
                    h.submat(nr * n, am * n, (nr + 1) * n - 1, (am + 1) * n - 1) +=
                        p.gain * b(nr) * a_bb(am) * block;
            }
        }
        return h;
    }

    cx_mat ideal_channel(const Path &los, const OffsetPlan &plan, const OfdmGrid &grid,
                         arma::uword num_rx)
    {
        const cx_vec a_bb = steering_tx_baseband(plan, {los.distance_m, los.aod_rad});
        const cx_vec b = steering_rx(los.aoa_rad, num_rx);
        const cx_mat outer = b * a_bb.st();
        return arma::kron(outer, arma::eye<cx_mat>(grid.num_subcarriers, grid.num_subcarriers));
    }

} // namespace fldma
