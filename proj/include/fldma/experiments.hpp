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

#ifndef FLDMA_EXPERIMENTS_HPP
#define FLDMA_EXPERIMENTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fldma/channel.hpp"
#include "fldma/common.hpp"
#include "fldma/precoding.hpp"

namespace fldma
{
    enum class SchemeUnderTest
    {
        fldma_mmse,
        fldma_zf,
        sdma_mmse,
        sdma_zf
    };

    std::string to_string(SchemeUnderTest scheme);
    SchemeUnderTest scheme_from_string(const std::string &name);
    bool is_fldma(SchemeUnderTest scheme);
    bool is_mmse(SchemeUnderTest scheme);

    // One Monte-Carlo drop. All schemes share the UE geometry and multipath
    // of the trial; SDMA is the same pipeline with the zero offset plan and
    // no spectral overhead.
    struct TrialRecord
    {
        std::uint64_t trial_index = 0;
        std::map<SchemeUnderTest, arma::vec> sinrs;
        std::map<SchemeUnderTest, double> rate; // bits/s/Hz
        double worst_condition = 0.0;           // max cond(H H^H) across schemes
        bool ill_conditioned = false;           // cond above 1e10 (kept, flagged)
    };

    TrialRecord run_trial(const Scenario &scenario, std::uint64_t trial_index,
                          const std::vector<SchemeUnderTest> &schemes);

    enum class SweptParameter
    {
        snr_db,
        num_ues,
        theta_max,
        r_max,
        rho_max,
        num_paths,
        rician_kappa
    };

    std::string to_string(SweptParameter p);
    SweptParameter swept_parameter_from_string(const std::string &name);
    Scenario apply_parameter(Scenario base, SweptParameter p, double value);

    struct SweepSpec
    {
        Scenario base;
        SweptParameter parameter = SweptParameter::snr_db;
        std::vector<double> values; // non-empty, strictly monotone
        std::vector<SchemeUnderTest> schemes;
    };

    struct SchemeStats
    {
        double mean = 0.0;
        double std_err = 0.0;
        double ci95 = 0.0; // 1.96 * std_err
    };

    struct SweepPoint
    {
        double value = 0.0;
        std::map<SchemeUnderTest, SchemeStats> stats;
        std::optional<double> fldma_bound; // Lemma 2 (K = 2) or Lemma 3
        arma::uword ill_conditioned_trials = 0;
    };

    struct SweepResult
    {
        std::vector<SweepPoint> points;
        arma::uword trials = 0;
        double wall_clock_s = 0.0;
    };

    // Deterministic for a given base seed regardless of worker count;
    // workers = 0 picks the hardware concurrency.
    SweepResult monte_carlo(const SweepSpec &spec, unsigned workers = 0);

    // Two-UE ergodic upper bound
    // 2 N/(N + rho) log2(((g+1)^2 - g^2/(M-1)) / (1+g))
    double two_ue_bound(double snr_linear, arma::uword num_elements,
                        arma::uword num_subcarriers, double rho_max);

    // High-SNR multi-UE upper bound K N/(N + rho) log2(g (M-K+1)/M); empty
    // outside its validity region g (M-K+1)/M > 1.
    std::optional<double> multi_ue_bound(double snr_linear, arma::uword num_elements,
                                         arma::uword num_ues, arma::uword num_subcarriers,
                                         double rho_max);

    // True when a two-UE FLDMA drop at these angles beats the phased-array
    // baseline: Sa_M^2((sin t1 - sin t2)/2) > 1/M.
    bool corollary3_predicate(double theta1_rad, double theta2_rad, arma::uword num_elements);

    // Brute-force permutation ensemble of eta(p, q); the independent oracle
    // for correlation_mean / correlation_var.
    struct Lemma1Stats
    {
        cx_double mean{0.0, 0.0};
        double variance = 0.0;
        double mean_std_err = 0.0;
        double variance_std_err = 0.0;
        arma::uword num_shuffles = 0;
    };

    Lemma1Stats lemma1_oracle(double p, double q, arma::uword num_elements,
                              arma::uword num_shuffles, std::uint64_t seed);

    struct PresetRun
    {
        std::string label;
        SweepSpec spec;
    };

    struct Preset
    {
        std::string name;
        std::string description;
        std::vector<PresetRun> runs;
    };

    std::vector<std::string> preset_names();
    Preset make_preset(const std::string &name);

} // namespace fldma

#endif
