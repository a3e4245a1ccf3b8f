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

#include "fldma/precoding.hpp"

#include <cmath>

namespace fldma
{

    MuMimoChannel::MuMimoChannel(cx_mat h_, double snr_linear_)
        : h(std::move(h_)), snr_linear(snr_linear_)
    {
        if (h.n_rows == 0 || h.n_cols == 0)
            throw std::invalid_argument("MuMimoChannel: empty channel matrix");
        if (h.n_rows > h.n_cols)
            throw std::invalid_argument("MuMimoChannel: more UEs than antennas (K must not exceed M)");
        if (!(snr_linear > 0.0))
            throw std::invalid_argument("MuMimoChannel: SNR must be positive");
    }

    // Solves (H H^H + diag_load I) X = H and returns X^H = H^H (...)^{-1}
    static cx_mat right_inverse(const cx_mat &h, double diag_load)
    {
        const arma::uword k = h.n_rows;
        cx_mat gram = h * h.t();
        if (diag_load != 0.0)
            gram.diag() += diag_load;
        cx_mat x;
        if (!arma::solve(x, gram, h, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
            throw precondition_error("precoder: Gram matrix solve failed (rank-deficient channel, "
                                     "rcond ~ " +
                                     std::to_string(arma::rcond(gram)) + ", K = " +
                                     std::to_string(k) + ")");
        return x.t();
    }

    cx_mat mmse_precoder_raw(const MuMimoChannel &ch)
    {
        return right_inverse(ch.h, 1.0 / ch.snr_linear);
    }

    cx_mat zf_precoder_raw(const MuMimoChannel &ch)
    {
        return right_inverse(ch.h, 0.0);
    }

    cx_mat normalize_columns(cx_mat w)
    {
        for (arma::uword c = 0; c < w.n_cols; c++)
        {
            const double n = arma::norm(w.col(c));
            if (n == 0.0)
                throw precondition_error("normalize_columns: zero precoding column");
            w.col(c) /= n;
        }
        return w;
    }

    cx_mat mmse_precoder(const MuMimoChannel &ch)
    {
        return normalize_columns(mmse_precoder_raw(ch));
    }

    cx_mat zf_precoder(const MuMimoChannel &ch)
    {
        return normalize_columns(zf_precoder_raw(ch));
    }

    cx_mat scale_to_sum_power(cx_mat w, double total_power)
    {
        const double f = arma::norm(w, "fro");
        if (f == 0.0)
            throw precondition_error("scale_to_sum_power: zero precoding matrix");
        w *= std::sqrt(total_power) / f;
        return w;
    }

    cx_mat pre_equalizer(const cx_mat &h_actual, const cx_mat &h_ideal)
    {
        if (h_actual.n_rows != h_ideal.n_rows || h_actual.n_cols != h_ideal.n_cols)
            throw std::invalid_argument("pre_equalizer: actual and ideal channels must share dimensions");
        if (h_actual.n_rows > h_actual.n_cols)
            throw std::invalid_argument("pre_equalizer: channel has no right inverse (rows exceed columns)");

        const cx_mat gram = h_actual * h_actual.t();
        cx_mat x;
        if (!arma::solve(x, gram, h_ideal, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
            throw precondition_error("pre_equalizer: rank-deficient channel, rcond ~ " +
                                     std::to_string(arma::rcond(gram)));
        return h_actual.t() * x;
    }

    arma::vec sinr_closed_form(const MuMimoChannel &ch)
    {
        const arma::uword k = ch.num_ues();
        cx_mat gram = ch.h * ch.h.t();
        gram.diag() += 1.0 / ch.snr_linear;
        cx_mat inv;
        if (!arma::solve(inv, gram, arma::eye<cx_mat>(k, k),
                         arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
            throw precondition_error("sinr_closed_form: Gram matrix solve failed");
        arma::vec out(k);
        for (arma::uword i = 0; i < k; i++)
            out(i) = ch.snr_linear / inv(i, i).real() - 1.0;
        return out;
    }

    arma::vec sinr_general(const cx_mat &h, const cx_mat &w, const arma::vec &power,
                           double noise_var)
    {
        if (h.n_cols != w.n_rows || h.n_rows != w.n_cols)
            throw std::invalid_argument("sinr_general: H is K x M and W must be M x K");
        if (power.n_elem != h.n_rows)
            throw std::invalid_argument("sinr_general: one power entry per UE required");
        if (!(noise_var > 0.0))
            throw std::invalid_argument("sinr_general: noise variance must be positive");

        const arma::uword k = h.n_rows;
        const cx_mat effective = h * w; // entry (k, i): UE k's view of stream i
        arma::vec out(k);
        for (arma::uword r = 0; r < k; r++)
        {
            double interference = 0.0;
            for (arma::uword c = 0; c < k; c++)
                if (c != r)
                    interference += power(c) * power(c) * std::norm(effective(r, c));
            const double signal = power(r) * power(r) * std::norm(effective(r, r));
            out(r) = signal / (interference + noise_var);
        }
        return out;
    }

    double spectral_efficiency(const arma::vec &sinrs, arma::uword num_subcarriers,
                               double rho_max)
    {
        if (rho_max < 0.0)
            throw std::invalid_argument("spectral_efficiency: rho_max must be non-negative");
        double sum = 0.0;
        for (const double s : sinrs)
        {
            if (s < 0.0)
                throw std::invalid_argument("spectral_efficiency: negative SINR");
            sum += std::log2(1.0 + s);
        }
        const double n = static_cast<double>(num_subcarriers);
        return n / (n + rho_max) * sum;
    }

} // namespace fldma
