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

#include "fldma/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "fldma/rng.hpp"

namespace fldma
{

    std::string to_string(SchemeUnderTest scheme)
    {
        switch (scheme)
        {
        case SchemeUnderTest::fldma_mmse:
            return "fldma_mmse";
        case SchemeUnderTest::fldma_zf:
            return "fldma_zf";
        case SchemeUnderTest::sdma_mmse:
            return "sdma_mmse";
        case SchemeUnderTest::sdma_zf:
            return "sdma_zf";
        }
        return "unknown";
    }

    SchemeUnderTest scheme_from_string(const std::string &name)
    {
        if (name == "fldma_mmse")
            return SchemeUnderTest::fldma_mmse;
        if (name == "fldma_zf")
            return SchemeUnderTest::fldma_zf;
        if (name == "sdma_mmse")
            return SchemeUnderTest::sdma_mmse;
        if (name == "sdma_zf")
            return SchemeUnderTest::sdma_zf;
        throw config_error("unknown scheme '" + name + "'");
    }

    bool is_fldma(SchemeUnderTest scheme)
    {
        return scheme == SchemeUnderTest::fldma_mmse || scheme == SchemeUnderTest::fldma_zf;
    }

    bool is_mmse(SchemeUnderTest scheme)
    {
        return scheme == SchemeUnderTest::fldma_mmse || scheme == SchemeUnderTest::sdma_mmse;
    }

    namespace
    {
        // stream tags for the per-trial seed derivation
        constexpr std::uint64_t stream_geometry = 1;
        constexpr std::uint64_t stream_plan = 2;
        constexpr std::uint64_t stream_multipath = 3;

        struct SchemeOutcome
        {
            arma::vec sinrs;
            double rate = 0.0;
            double condition = 0.0;
        };

        // Downlink precoding under the transmit sum-power constraint
        // ||W||_F^2 = K (equal per-UE power a_k = 1, noise 1/gamma), evaluated
        // with the general SINR formula. ZF on a numerically singular channel
        // collapses to zero SINR rather than aborting the trial.
        SchemeOutcome evaluate_scheme(const cx_mat &h, double snr_linear, bool mmse,
                                      arma::uword num_subcarriers, double overhead_rho)
        {
            const arma::uword k = h.n_rows;
            const MuMimoChannel ch(h, snr_linear);
            const arma::vec power(k, arma::fill::ones);

            SchemeOutcome out;
            {
                cx_mat gram = h * h.t();
                out.condition = arma::cond(gram);
            }
            cx_mat w_raw;
            try
            {
                w_raw = mmse ? mmse_precoder_raw(ch) : zf_precoder_raw(ch);
            }
            catch (const precondition_error &)
            {
                out.sinrs.zeros(k);
                out.rate = 0.0;
                out.condition = std::numeric_limits<double>::infinity();
                return out;
            }
            const cx_mat w = scale_to_sum_power(std::move(w_raw), static_cast<double>(k));
            out.sinrs = sinr_general(h, w, power, 1.0 / snr_linear);
            out.rate = spectral_efficiency(out.sinrs, num_subcarriers, overhead_rho);
            return out;
        }
    } // namespace

    TrialRecord run_trial(const Scenario &scenario, std::uint64_t trial_index,
                          const std::vector<SchemeUnderTest> &schemes)
    {
        if (schemes.empty())
            throw std::invalid_argument("run_trial: no schemes requested");

        // FLDMA and SDMA see identical geometry and multipath within a trial
        const std::uint64_t geo_seed = Rng::derive(scenario.seed, trial_index, stream_geometry);
        const auto locations = place_ues(scenario.num_ues, scenario.theta_max_rad,
                                         scenario.r_max_m, geo_seed);
        std::vector<UeChannel> ues;
        ues.reserve(locations.size());
        for (arma::uword k = 0; k < locations.size(); k++)
        {
            const std::uint64_t ue_seed =
                Rng::derive(Rng::derive(scenario.seed, trial_index, stream_multipath), k);
            ues.push_back(generate_multipath(locations[k], scenario.num_nlos_paths,
                                             scenario.rician_kappa, scenario.theta_max_rad,
                                             scenario.r_max_m, ue_seed));
        }

        bool want_fldma = false;
        bool want_sdma = false;
        for (const auto s : schemes)
            (is_fldma(s) ? want_fldma : want_sdma) = true;

        cx_mat h_fldma;
        cx_mat h_sdma;
        if (want_fldma)
        {
            const OffsetPlan plan =
                scenario.make_plan(Rng::derive(scenario.seed, trial_index, stream_plan));
            h_fldma = channel_matrix(ues, plan);
        }
        if (want_sdma)
        {
            const OffsetPlan zero = generate_offsets(OffsetScheme::zero,
                                                     scenario.geometry.num_elements, 0.0, 0);
            h_sdma = channel_matrix(ues, zero);
        }

        TrialRecord record;
        record.trial_index = trial_index;
        for (const auto s : schemes)
        {
            const cx_mat &h = is_fldma(s) ? h_fldma : h_sdma;
            const double rho = is_fldma(s) ? scenario.overhead_rho() : 0.0;
            SchemeOutcome outcome = evaluate_scheme(h, scenario.snr_linear(), is_mmse(s),
                                                    scenario.grid.num_subcarriers, rho);
            record.worst_condition = std::max(record.worst_condition, outcome.condition);
            record.sinrs[s] = std::move(outcome.sinrs);
            record.rate[s] = outcome.rate;
        }
        record.ill_conditioned = record.worst_condition > 1e10;
        return record;
    }

    std::string to_string(SweptParameter p)
    {
        switch (p)
        {
        case SweptParameter::snr_db:
            return "snr_db";
        case SweptParameter::num_ues:
            return "ues";
        case SweptParameter::theta_max:
            return "theta_max_deg";
        case SweptParameter::r_max:
            return "r_max_m";
        case SweptParameter::rho_max:
            return "rho_max";
        case SweptParameter::num_paths:
            return "paths";
        case SweptParameter::rician_kappa:
            return "rician_kappa";
        }
        return "unknown";
    }

    SweptParameter swept_parameter_from_string(const std::string &name)
    {
        if (name == "snr_db")
            return SweptParameter::snr_db;
        if (name == "ues")
            return SweptParameter::num_ues;
        if (name == "theta_max_deg")
            return SweptParameter::theta_max;
        if (name == "r_max_m")
            return SweptParameter::r_max;
        if (name == "rho_max")
            return SweptParameter::rho_max;
        if (name == "paths")
            return SweptParameter::num_paths;
        if (name == "rician_kappa")
            return SweptParameter::rician_kappa;
        throw config_error("unknown sweep parameter '" + name + "'");
    }

    Scenario apply_parameter(Scenario base, SweptParameter p, double value)
    {
        switch (p)
        {
        case SweptParameter::snr_db:
            base.snr_db = value;
            break;
        case SweptParameter::num_ues:
            base.num_ues = static_cast<arma::uword>(value);
            break;
        case SweptParameter::theta_max:
            base.theta_max_rad = deg_to_rad(value);
            break;
        case SweptParameter::r_max:
            base.r_max_m = value;
            break;
        case SweptParameter::rho_max:
            base.rho_max = value;
            break;
        case SweptParameter::num_paths:
            base.num_nlos_paths = static_cast<arma::uword>(value);
            break;
        case SweptParameter::rician_kappa:
            base.rician_kappa = value;
            break;
        }
        return base;
    }

    namespace
    {
        void validate_sweep(const SweepSpec &spec)
        {
            if (spec.values.empty())
                throw precondition_error("sweep: no parameter values");
            if (spec.schemes.empty())
                throw precondition_error("sweep: no schemes");
            for (std::size_t i = 1; i < spec.values.size(); i++)
            {
                const bool up = spec.values[1] > spec.values[0];
                if ((up && spec.values[i] <= spec.values[i - 1]) ||
                    (!up && spec.values[i] >= spec.values[i - 1]))
                    throw precondition_error("sweep: values must be strictly monotone");
            }
        }

        SchemeStats stats_from_rates(const std::vector<double> &rates)
        {
            const double n = static_cast<double>(rates.size());
            double mean = 0.0;
            for (const double r : rates)
                mean += r;
            mean /= n;
            double var = 0.0;
            for (const double r : rates)
                var += (r - mean) * (r - mean);
            var = (rates.size() > 1) ? var / (n - 1.0) : 0.0;
            SchemeStats s;
            s.mean = mean;
            s.std_err = std::sqrt(var / n);
            s.ci95 = 1.96 * s.std_err;
            return s;
        }
    } // namespace

    SweepResult monte_carlo(const SweepSpec &spec, unsigned workers)
    {
        validate_sweep(spec);
        const auto t_start = std::chrono::steady_clock::now();

        unsigned effective = workers ? workers : std::max(1u, std::thread::hardware_concurrency());

        SweepResult result;
        result.trials = spec.base.trials;

        for (const double value : spec.values)
        {
            const Scenario scenario = apply_parameter(spec.base, spec.parameter, value);
            scenario.validate();

            // one slot per trial; sequential aggregation after the join keeps
            // the result independent of scheduling
            std::vector<TrialRecord> records(scenario.trials);
            std::atomic<std::uint64_t> next{0};
            std::exception_ptr first_error;
            std::mutex error_mutex;

            auto worker = [&]()
            {
                for (;;)
                {
                    const std::uint64_t t = next.fetch_add(1);
                    if (t >= scenario.trials)
                        return;
                    try
                    {
                        records[t] = run_trial(scenario, t, spec.schemes);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        return;
                    }
                }
            };

            const unsigned n_threads =
                std::min<std::uint64_t>(effective, scenario.trials);
            if (n_threads <= 1)
            {
                worker();
            }
            else
            {
                std::vector<std::thread> pool;
                pool.reserve(n_threads);
                for (unsigned i = 0; i < n_threads; i++)
                    pool.emplace_back(worker);
                for (auto &th : pool)
                    th.join();
            }
            if (first_error)
                std::rethrow_exception(first_error);

            SweepPoint point;
            point.value = value;
            for (const auto scheme : spec.schemes)
            {
                std::vector<double> rates;
                rates.reserve(records.size());
                for (const auto &rec : records)
                    rates.push_back(rec.rate.at(scheme));
                point.stats[scheme] = stats_from_rates(rates);
            }
            for (const auto &rec : records)
                if (rec.ill_conditioned)
                    point.ill_conditioned_trials++;

            bool fldma_requested = false;
            for (const auto s : spec.schemes)
                fldma_requested |= is_fldma(s);
            if (fldma_requested)
            {
                if (scenario.num_ues == 2)
                    point.fldma_bound = two_ue_bound(scenario.snr_linear(),
                                                     scenario.geometry.num_elements,
                                                     scenario.grid.num_subcarriers,
                                                     scenario.overhead_rho());
                else
                    point.fldma_bound = multi_ue_bound(scenario.snr_linear(),
                                                       scenario.geometry.num_elements,
                                                       scenario.num_ues,
                                                       scenario.grid.num_subcarriers,
                                                       scenario.overhead_rho());
            }
            result.points.push_back(std::move(point));
        }

        result.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return result;
    }

    double two_ue_bound(double snr_linear, arma::uword num_elements,
                        arma::uword num_subcarriers, double rho_max)
    {
        if (num_elements < 2)
            throw std::invalid_argument("two_ue_bound: need at least two antennas");
        const double g = snr_linear;
        const double m = static_cast<double>(num_elements);
        const double n = static_cast<double>(num_subcarriers);
        const double arg = ((g + 1.0) * (g + 1.0) - g * g / (m - 1.0)) / (1.0 + g);
        return 2.0 * n / (n + rho_max) * std::log2(arg);
    }

    std::optional<double> multi_ue_bound(double snr_linear, arma::uword num_elements,
                                         arma::uword num_ues, arma::uword num_subcarriers,
                                         double rho_max)
    {
        if (num_ues < 1 || num_ues > num_elements)
            throw std::invalid_argument("multi_ue_bound: K must lie in [1, M]");
        const double m = static_cast<double>(num_elements);
        const double k = static_cast<double>(num_ues);
        const double n = static_cast<double>(num_subcarriers);
        const double arg = snr_linear * (m - k + 1.0) / m;
        if (arg <= 1.0)
            return std::nullopt; // outside the high-SNR validity region
        return k * n / (n + rho_max) * std::log2(arg);
    }

    bool corollary3_predicate(double theta1_rad, double theta2_rad, arma::uword num_elements)
    {
        const double p = (std::sin(theta1_rad) - std::sin(theta2_rad)) / 2.0;
        const double s = sa(static_cast<arma::sword>(num_elements), p);
        return s * s > 1.0 / static_cast<double>(num_elements);
    }

    Lemma1Stats lemma1_oracle(double p, double q, arma::uword num_elements,
                              arma::uword num_shuffles, std::uint64_t seed)
    {
        if (num_elements < 1)
            throw std::invalid_argument("lemma1_oracle: need at least one element");
        if (num_shuffles < 2)
            throw std::invalid_argument("lemma1_oracle: need at least two shuffles");

        const arma::uword m = num_elements;
        const double md = static_cast<double>(m);
        Rng rng(seed);
        std::vector<double> z(m);

        // eta_s = (1/M) sum_m e^{j 2 pi (m p - z_m q)} over seeded shuffles
        std::vector<cx_double> samples(num_shuffles);
        for (arma::uword s = 0; s < num_shuffles; s++)
        {
            for (arma::uword i = 0; i < m; i++)
                z[i] = static_cast<double>(i);
            rng.shuffle(z);
            cx_double eta{0.0, 0.0};
            for (arma::uword i = 0; i < m; i++)
                eta += std::polar(1.0, two_pi * (static_cast<double>(i) * p - z[i] * q));
            samples[s] = eta / md;
        }

        const double n = static_cast<double>(num_shuffles);
        cx_double mean{0.0, 0.0};
        for (const auto &e : samples)
            mean += e;
        mean /= n;

        double var = 0.0;    // scalar variance E|eta - mean|^2
        double fourth = 0.0; // for the variance-of-variance estimate
        for (const auto &e : samples)
        {
            const double d2 = std::norm(e - mean);
            var += d2;
            fourth += d2 * d2;
        }
        var /= (n - 1.0);
        fourth /= n;

        Lemma1Stats out;
        out.mean = mean;
        out.variance = var;
        out.mean_std_err = std::sqrt(var / n);
        out.variance_std_err = std::sqrt(std::max(0.0, fourth - var * var) / n);
        out.num_shuffles = num_shuffles;
        return out;
    }

    std::vector<std::string> preset_names()
    {
        return {"fig6a", "fig6b", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"};
    }

    namespace
    {
        Scenario reference_scenario()
        {
            Scenario s;
            s.geometry = ArrayGeometry::half_wavelength(128, 30e9);
            s.grid = OfdmGrid(512, 15e3, 128);
            s.scheme = OffsetScheme::symmetric_random_permutation;
            s.rho_max = 30.0;
            s.num_ues = 2;
            s.theta_max_rad = deg_to_rad(60.0);
            s.r_max_m = 3000.0;
            s.num_nlos_paths = 0;
            s.rician_kappa = 0.0;
            s.snr_db = 30.0;
            s.trials = 10000;
            s.seed = 1;
            return s;
        }

        PresetRun fldma_run(Scenario base, const std::string &label, double rho,
                            SweptParameter p, std::vector<double> values,
                            std::vector<SchemeUnderTest> schemes)
        {
            base.rho_max = rho;
            return {label, SweepSpec{base, p, std::move(values), std::move(schemes)}};
        }
    } // namespace

    Preset make_preset(const std::string &name)
    {
        Scenario base = reference_scenario();
        const std::vector<double> snrs{0, 5, 10, 15, 20, 25, 30};
        const std::vector<SchemeUnderTest> mmse_only{SchemeUnderTest::fldma_mmse};
        const std::vector<SchemeUnderTest> sdma_only{SchemeUnderTest::sdma_mmse};

        if (name == "fig6a" || name == "fig6b")
        {
            base.num_ues = 2;
            base.theta_max_rad = deg_to_rad(name == "fig6a" ? 5.0 : 20.0);
            Preset p{name,
                     "two UEs, single path, SE vs SNR against the two-UE bound, theta_max = " +
                         std::string(name == "fig6a" ? "5 deg" : "20 deg"),
                     {}};
            for (const double rho : {1.0, 10.0, 50.0})
                p.runs.push_back(fldma_run(base, "rho" + std::to_string(static_cast<int>(rho)),
                                           rho, SweptParameter::snr_db, snrs, mmse_only));
            return p;
        }
        if (name == "fig7")
        {
            base.num_ues = 2;
            base.snr_db = 20.0;
            const std::vector<double> angles{0, 1, 2, 3, 5, 10, 15, 20, 30};
            Preset p{name,
                     "two UEs at 20 dB, SE vs sector half-angle; UEs span the full 0..3 km range",
                     {}};
            for (const double rho : {1.0, 10.0, 50.0})
                p.runs.push_back(fldma_run(base, "rho" + std::to_string(static_cast<int>(rho)),
                                           rho, SweptParameter::theta_max, angles, mmse_only));
            p.runs.push_back(fldma_run(base, "sdma", base.rho_max, SweptParameter::theta_max,
                                       angles, sdma_only));
            return p;
        }
        if (name == "fig8")
        {
            base.snr_db = 30.0;
            base.rho_max = 30.0;
            Preset p{name, "SE vs number of UEs at 30 dB, rho_max = 30, all four schemes", {}};
            p.runs.push_back({"all", SweepSpec{base, SweptParameter::num_ues,
                                               {10, 20, 30, 40, 50, 60, 70, 80, 90, 100},
                                               {SchemeUnderTest::fldma_mmse, SchemeUnderTest::fldma_zf,
                                                SchemeUnderTest::sdma_mmse, SchemeUnderTest::sdma_zf}}});
            return p;
        }
        if (name == "fig9")
        {
            base.num_ues = 100;
            base.rician_kappa = 0.0;
            Preset p{name, "100 UEs at 30 dB, SE vs NLoS path count at kappa = 0", {}};
            p.runs.push_back({"all", SweepSpec{base, SweptParameter::num_paths,
                                               {0, 2, 4, 8},
                                               {SchemeUnderTest::fldma_mmse, SchemeUnderTest::sdma_mmse}}});
            return p;
        }
        if (name == "fig10")
        {
            base.num_ues = 100;
            base.num_nlos_paths = 4;
            Preset p{name, "100 UEs at 30 dB, SE vs Rician factor with 4 NLoS paths", {}};
            p.runs.push_back({"all", SweepSpec{base, SweptParameter::rician_kappa,
                                               {0, 1, 10},
                                               {SchemeUnderTest::fldma_mmse, SchemeUnderTest::sdma_mmse}}});
            return p;
        }
        if (name == "fig11")
        {
            base.num_ues = 100;
            const std::vector<double> angles{1, 2, 5, 10, 20, 40, 60};
            Preset p{name, "100 UEs at 30 dB, SE vs sector half-angle for several rho_max", {}};
            for (const double rho : {1.0, 10.0, 30.0, 50.0})
                p.runs.push_back(fldma_run(base, "rho" + std::to_string(static_cast<int>(rho)),
                                           rho, SweptParameter::theta_max, angles, mmse_only));
            p.runs.push_back(fldma_run(base, "sdma", base.rho_max, SweptParameter::theta_max,
                                       angles, sdma_only));
            return p;
        }
        if (name == "fig12")
        {
            base.num_ues = 100;
            const std::vector<double> ranges{500, 1000, 1500, 2000, 2500, 3000};
            Preset p{name, "100 UEs at 30 dB, SE vs sector radius for several rho_max", {}};
            for (const double rho : {1.0, 10.0, 30.0, 50.0})
                p.runs.push_back(fldma_run(base, "rho" + std::to_string(static_cast<int>(rho)),
                                           rho, SweptParameter::r_max, ranges, mmse_only));
            p.runs.push_back(fldma_run(base, "sdma", base.rho_max, SweptParameter::r_max,
                                       ranges, sdma_only));
            return p;
        }
        throw config_error("unknown preset '" + name + "'; available: fig6a fig6b fig7 fig8 "
                           "fig9 fig10 fig11 fig12");
    }

} // namespace fldma
