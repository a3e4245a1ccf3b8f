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

#include "fldma/waveform.hpp"

#include <cmath>

#include "fldma/rng.hpp"

namespace fldma
{

    OfdmGrid::OfdmGrid(arma::uword num_subcarriers_, double subcarrier_spacing_hz_, arma::uword cp_samples_)
        : num_subcarriers(num_subcarriers_),
          subcarrier_spacing_hz(subcarrier_spacing_hz_),
          cp_samples(cp_samples_)
    {
        if (num_subcarriers < 1)
            throw std::invalid_argument("OfdmGrid: need at least one subcarrier");
        if (subcarrier_spacing_hz <= 0.0)
            throw std::invalid_argument("OfdmGrid: subcarrier spacing must be positive");
        if (cp_samples >= num_subcarriers)
            throw std::invalid_argument("OfdmGrid: CP must be shorter than the symbol");
    }

    cx_mat random_qpsk_frame(const OfdmGrid &grid, arma::uword num_tx, Rng &rng)
    {
        static const double a = 1.0 / std::sqrt(2.0);
        cx_mat frame(grid.num_subcarriers, num_tx);
        for (arma::uword m = 0; m < num_tx; m++)
            for (arma::uword l = 0; l < grid.num_subcarriers; l++)
            {
                const std::uint64_t bits = rng.uniform_below(4);
                frame(l, m) = {bits & 1 ? a : -a, bits & 2 ? a : -a};
            }
        return frame;
    }

    cx_double ici_beta(arma::sword l, arma::sword l_prime, double rho, arma::uword num_subcarriers)
    {
        const double n = static_cast<double>(num_subcarriers);
        const double x = static_cast<double>(l - l_prime) + rho;
        return sa(static_cast<arma::sword>(num_subcarriers), x / n) *
               std::polar(1.0, pi * x * (n - 1.0) / n);
    }

    cx_double ici_alpha(double rho, arma::uword num_subcarriers)
    {
        return ici_beta(0, 0, rho, num_subcarriers);
    }

    IciCoefficients ici_coefficients(const OffsetPlan &plan, const OfdmGrid &grid,
                                     arma::uword max_entries)
    {
        const arma::uword n = grid.num_subcarriers;
        const arma::uword m = plan.size();
        if (n * n * m > max_entries)
            throw precondition_error("ici_coefficients: beta cube of " + std::to_string(n * n * m) +
                                     " entries exceeds the cap; use the scalar ici_beta instead");

        IciCoefficients out;
        out.alpha.set_size(m);
        out.beta.set_size(n, n, m);
        for (arma::uword am = 0; am < m; am++)
        {
            const double rho = plan.offsets_hz(am) / grid.subcarrier_spacing_hz;
            out.alpha(am) = ici_alpha(rho, n);
            for (arma::uword lp = 0; lp < n; lp++)
                for (arma::uword l = 0; l < n; l++)
                    out.beta(l, lp, am) = (l == lp)
                                              ? cx_double(0.0, 0.0)
                                              : ici_beta(static_cast<arma::sword>(l),
                                                         static_cast<arma::sword>(lp), rho, n);
        }
        return out;
    }

    cx_mat modulate(const cx_mat &frame, const OfdmGrid &grid, const OffsetPlan &plan)
    {
        const arma::uword n = grid.num_subcarriers;
        const arma::uword m = plan.size();
        if (frame.n_rows != n || frame.n_cols != m)
            throw std::invalid_argument("modulate: frame dimensions do not match grid/plan");

        const arma::uword cp = grid.cp_samples;
        cx_mat samples(cp + n, m);
        for (arma::uword am = 0; am < m; am++)
        {
            // body holds x_m at lattice points i' = 0..N-1; the CP is the
            // cyclic tail shifted to i' = -Ncp..-1
            const cx_vec body = static_cast<double>(n) * arma::ifft(frame.col(am));
            const double rho = plan.offsets_hz(am) / grid.subcarrier_spacing_hz;
            for (arma::uword i = 0; i < cp + n; i++)
            {
                const arma::sword ip = static_cast<arma::sword>(i) - static_cast<arma::sword>(cp);
                const arma::uword src = static_cast<arma::uword>((ip + static_cast<arma::sword>(n)) %
                                                                 static_cast<arma::sword>(n));
                // frequency-offset ramp is not cyclic: evaluate at the true i'
                const cx_double ramp = std::polar(1.0, two_pi * rho * static_cast<double>(ip) /
                                                           static_cast<double>(n));
                samples(i, am) = body(src) * ramp;
            }
        }
        return samples;
    }

    cx_vec synthesize_received(const cx_mat &frame, const OfdmGrid &grid, const OffsetPlan &plan,
                               const std::vector<Path> &paths, arma::uword rx_index,
                               arma::uword num_rx)
    {
        const arma::uword n = grid.num_subcarriers;
        const arma::uword m = plan.size();
        if (frame.n_rows != n || frame.n_cols != m)
            throw std::invalid_argument("synthesize_received: frame dimensions do not match grid/plan");
        if (rx_index >= num_rx)
            throw std::invalid_argument("synthesize_received: rx antenna index out of range");
        for (const Path &p : paths)
            if (p.distance_m / speed_of_light > grid.cp_duration_s())
                throw precondition_error("synthesize_received: path delay exceeds the CP; the "
                                         "scenario violates the waveform coverage design");

        cx_vec received(n, arma::fill::zeros);
        for (const Path &p : paths)
        {
            const cx_vec a_bb = steering_tx_baseband(plan, {p.distance_m, p.aod_rad});
            const cx_double b_n = steering_rx(p.aoa_rad, num_rx)(rx_index);
            // per-subcarrier delay phase (the Phi matrix), applied in the
            // frequency domain before the inverse transform
            cx_vec phi(n);
            for (arma::uword l = 0; l < n; l++)
                phi(l) = std::polar(1.0, -two_pi * static_cast<double>(l) *
                                             grid.subcarrier_spacing_hz * p.distance_m / speed_of_light);

            for (arma::uword am = 0; am < m; am++)
            {
                const cx_vec body = static_cast<double>(n) * arma::ifft(cx_vec(phi % frame.col(am)));
                const double rho = plan.offsets_hz(am) / grid.subcarrier_spacing_hz;
                const cx_double gain = p.gain * b_n * a_bb(am);
                for (arma::uword i = 0; i < n; i++)
                {
                    const cx_double ramp = std::polar(1.0, two_pi * rho * static_cast<double>(i) /
                                                               static_cast<double>(n));
                    received(i) += gain * body(i) * ramp;
                }
            }
        }
        return received;
    }

    cx_vec matched_filter_demod(const cx_vec &samples, const OfdmGrid &grid)
    {
        if (samples.n_elem != grid.num_subcarriers)
            throw std::invalid_argument("matched_filter_demod: expected exactly N_us samples");
        return arma::fft(samples) / static_cast<double>(grid.num_subcarriers);
    }

    double slight_offset_error(const OffsetPlan &plan, const OfdmGrid &grid)
    {
        const arma::uword n = grid.num_subcarriers;
        const arma::uword m = plan.size();
        // (F Xi_m F^H)_{a,b} = beta(b, a, rho_m); accumulate ||. - I||_F^2
        // over the d = b - a diagonals, each holding N - |d| entries
        double total = 0.0;
        for (arma::uword am = 0; am < m; am++)
        {
            const double rho = plan.offsets_hz(am) / grid.subcarrier_spacing_hz;
            for (arma::sword d = -(static_cast<arma::sword>(n) - 1);
                 d < static_cast<arma::sword>(n); d++)
            {
                const double count = static_cast<double>(n) - std::abs(static_cast<double>(d));
                cx_double entry = ici_beta(d, 0, rho, n);
                if (d == 0)
                    entry -= 1.0;
                total += count * std::norm(entry);
            }
        }
        const double identity_norm_sq = static_cast<double>(m) * static_cast<double>(n);
        return std::sqrt(total / identity_norm_sq);
    }

} // namespace fldma
