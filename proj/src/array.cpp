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

#include "fldma/array.hpp"

#include <cmath>

#include "fldma/rng.hpp"

namespace fldma
{

    ArrayGeometry ArrayGeometry::half_wavelength(arma::uword num_elements, double carrier_freq_hz)
    {
        if (num_elements < 1)
            throw std::invalid_argument("ArrayGeometry: need at least one element");
        if (carrier_freq_hz <= 0.0)
            throw std::invalid_argument("ArrayGeometry: carrier frequency must be positive");
        return {num_elements, carrier_freq_hz, speed_of_light / (2.0 * carrier_freq_hz)};
    }

    std::string to_string(OffsetScheme scheme)
    {
        switch (scheme)
        {
        case OffsetScheme::zero:
            return "zero";
        case OffsetScheme::uniform_increasing:
            return "uniform_increasing";
        case OffsetScheme::logarithmic:
            return "logarithmic";
        case OffsetScheme::random_permutation:
            return "random_permutation";
        case OffsetScheme::symmetric_random_permutation:
            return "symmetric_random_permutation";
        }
        return "unknown";
    }

    OffsetScheme offset_scheme_from_string(const std::string &name)
    {
        if (name == "zero")
            return OffsetScheme::zero;
        if (name == "uniform_increasing" || name == "uniform")
            return OffsetScheme::uniform_increasing;
        if (name == "logarithmic")
            return OffsetScheme::logarithmic;
        if (name == "random_permutation")
            return OffsetScheme::random_permutation;
        if (name == "symmetric_random_permutation" || name == "symmetric")
            return OffsetScheme::symmetric_random_permutation;
        throw config_error("unknown offset scheme '" + name + "'");
    }

    OffsetPlan generate_offsets(OffsetScheme scheme, arma::uword num_elements,
                                double delta_f_hz, std::uint64_t seed)
    {
        if (num_elements < 1)
            throw std::invalid_argument("generate_offsets: need at least one element");

        const arma::uword m = num_elements;
        OffsetPlan plan;
        plan.scheme = scheme;
        plan.delta_f_hz = (scheme == OffsetScheme::zero) ? 0.0 : delta_f_hz;
        plan.seed = seed;
        plan.offsets_hz.zeros(m);

        switch (scheme)
        {
        case OffsetScheme::zero:
            break;
        case OffsetScheme::uniform_increasing:
            for (arma::uword i = 0; i < m; i++)
                plan.offsets_hz(i) = static_cast<double>(i) * delta_f_hz;
            break;
        case OffsetScheme::logarithmic:
            if (m > 1)
            {
                const double scale = static_cast<double>(m - 1) / std::log(static_cast<double>(m));
                for (arma::uword i = 0; i < m; i++)
                    plan.offsets_hz(i) = scale * std::log(static_cast<double>(i + 1)) * delta_f_hz;
            }
            break;
        case OffsetScheme::random_permutation:
        case OffsetScheme::symmetric_random_permutation:
        {
            const double shift = (scheme == OffsetScheme::symmetric_random_permutation)
                                     ? static_cast<double>(m - 1) / 2.0
                                     : 0.0;
            std::vector<double> z(m);
            for (arma::uword i = 0; i < m; i++)
                z[i] = static_cast<double>(i) - shift;
            Rng rng(seed);
            rng.shuffle(z);
            plan.permutation = arma::vec(z);
            plan.offsets_hz = plan.permutation * delta_f_hz;
            break;
        }
        }
        return plan;
    }

    OffsetPlan generate_offsets_rho(OffsetScheme scheme, arma::uword num_elements,
                                    double rho_max, double subcarrier_spacing_hz,
                                    std::uint64_t seed)
    {
        if (subcarrier_spacing_hz <= 0.0)
            throw std::invalid_argument("generate_offsets_rho: subcarrier spacing must be positive");
        if (rho_max < 0.0)
            throw std::invalid_argument("generate_offsets_rho: rho_max must be non-negative");

        double delta_f = 0.0;
        if (scheme != OffsetScheme::zero && rho_max > 0.0)
        {
            if (num_elements < 2)
                throw precondition_error("generate_offsets_rho: the increment cell rho_max*spacing/(M-1) "
                                         "is undefined for a single-element array");
            const double span = static_cast<double>(num_elements - 1);
            // the symmetric sequence spans both signs, so its cell is doubled
            delta_f = (scheme == OffsetScheme::symmetric_random_permutation)
                          ? 2.0 * rho_max * subcarrier_spacing_hz / span
                          : rho_max * subcarrier_spacing_hz / span;
        }
        OffsetPlan plan = generate_offsets(scheme, num_elements, delta_f, seed);
        plan.rho_max = (scheme == OffsetScheme::zero) ? 0.0 : rho_max;
        return plan;
    }

    double sa(arma::sword n, double x)
    {
        if (n < 1)
            throw std::invalid_argument("sa: order must be positive");
        // Sa_N has period 2 in x (sign included); reduce for accuracy
        const double xr = std::remainder(x, 2.0);
        if (xr == 0.0)
            return 1.0;
        if (xr == 1.0 || xr == -1.0)
            return (n % 2 == 0) ? -1.0 : 1.0; // limit (-1)^(N-1)
        const double nd = static_cast<double>(n);
        return std::sin(pi * nd * xr) / (nd * std::sin(pi * xr));
    }

    cx_vec steering_tx(const OffsetPlan &plan, const PolarLocation &loc, double time_s)
    {
        const arma::uword m = plan.size();
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        const double half_sin = std::sin(loc.angle_rad) / 2.0;
        const double lag = time_s - loc.distance_m / speed_of_light;
        cx_vec a(m);
        for (arma::uword i = 0; i < m; i++)
        {
            const double phase = two_pi * (static_cast<double>(i) * half_sin + plan.offsets_hz(i) * lag);
            a(i) = std::polar(scale, phase);
        }
        return a;
    }

    cx_vec steering_tx_baseband(const OffsetPlan &plan, const PolarLocation &loc)
    {
        return steering_tx(plan, loc, 0.0);
    }

    cx_vec steering_rx(double aoa_rad, arma::uword num_rx)
    {
        if (num_rx < 1)
            throw std::invalid_argument("steering_rx: need at least one element");
        const double scale = 1.0 / std::sqrt(static_cast<double>(num_rx));
        const double s = std::sin(aoa_rad);
        cx_vec b(num_rx);
        for (arma::uword i = 0; i < num_rx; i++)
            b(i) = std::polar(scale, pi * static_cast<double>(i) * s);
        return b;
    }

    cx_double correlation(const cx_vec &a, const cx_vec &b)
    {
        if (a.n_elem != b.n_elem)
            throw std::invalid_argument("correlation: length mismatch");
        return arma::cdot(a, b);
    }

    cx_double correlation_mean(double p, double q, arma::uword num_elements)
    {
        const arma::sword m = static_cast<arma::sword>(num_elements);
        const double md = static_cast<double>(num_elements);
        // E[eta] = Sa_M(p) Sa_M(q) e^{j pi (M-1)(p-q)}
        return sa(m, p) * sa(m, q) * std::polar(1.0, pi * (md - 1.0) * (p - q));
    }

    double correlation_var(double p, double q, arma::uword num_elements)
    {
        if (num_elements < 2)
            return 0.0; // a single element is deterministic
        const arma::sword m = static_cast<arma::sword>(num_elements);
        const double md = static_cast<double>(num_elements);
        const double sp = sa(m, p) * sa(m, p);
        const double sq = sa(m, q) * sa(m, q);
        return md / (md - 1.0) * (sp - 1.0 / md) * (sq - 1.0 / md) - sp * sq + 1.0 / md;
    }

    double correlation_sq_approx(double p, double q, arma::uword num_elements)
    {
        const arma::sword m = static_cast<arma::sword>(num_elements);
        const double md = static_cast<double>(num_elements);
        const double sp = sa(m, p) * sa(m, p);
        const double sq = sa(m, q) * sa(m, q);
        if (num_elements < 2)
            return sp * sq;
        return 1.0 / md + md / (md - 1.0) * (sp - 1.0 / md) * (sq - 1.0 / md);
    }

    arma::mat beampattern(const OffsetPlan &plan, const PolarLocation &focus,
                          const arma::vec &r_grid_m, const arma::vec &theta_grid_rad)
    {
        if (r_grid_m.is_empty() || theta_grid_rad.is_empty())
            throw std::invalid_argument("beampattern: empty evaluation grid");

        const cx_vec a_focus = steering_tx_baseband(plan, focus);
        arma::mat pattern(r_grid_m.n_elem, theta_grid_rad.n_elem);
        for (arma::uword j = 0; j < theta_grid_rad.n_elem; j++)
        {
            for (arma::uword i = 0; i < r_grid_m.n_elem; i++)
            {
                const cx_vec a = steering_tx_baseband(plan, {r_grid_m(i), theta_grid_rad(j)});
                pattern(i, j) = std::abs(correlation(a_focus, a));
            }
        }
        return pattern;
    }

} // namespace fldma
