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

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fldma/config.hpp"
#include "fldma/experiments.hpp"
#include "fldma/io.hpp"
#include "fldma/rng.hpp"

namespace
{

    struct CommonOptions
    {
        std::string config_path;
        std::vector<std::string> overrides;
        std::string output_path;
        std::string format = "csv";
        unsigned workers = 0;
        std::optional<arma::uword> trials;
        std::optional<std::uint64_t> seed;
    };

    void add_common(CLI::App *cmd, CommonOptions &opt)
    {
        cmd->add_option("-c,--config", opt.config_path, "configuration file (key = value sections)");
        cmd->add_option("-s,--set", opt.overrides, "override as section.key=value (repeatable)");
        cmd->add_option("-o,--output", opt.output_path, "output file (default stdout)");
        cmd->add_option("--format", opt.format, "csv or pretty")
            ->check(CLI::IsMember({"csv", "pretty"}));
        cmd->add_option("--workers", opt.workers, "worker threads (default $FLDMA_WORKERS or all cores)");
        cmd->add_option("--trials", opt.trials, "Monte-Carlo trials override");
        cmd->add_option("--seed", opt.seed, "base seed override");
    }

    fldma::Config load_config(const CommonOptions &opt)
    {
        fldma::Config cfg = opt.config_path.empty() ? fldma::Config()
                                                    : fldma::Config::from_file(opt.config_path);
        for (const auto &o : opt.overrides)
            cfg.apply_override(o);
        return cfg;
    }

    unsigned resolve_workers(const CommonOptions &opt)
    {
        if (opt.workers)
            return opt.workers;
        if (const char *env = std::getenv("FLDMA_WORKERS"))
        {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        return 0; // auto
    }

    // Writes either to the chosen file or stdout
    class OutputTarget
    {
    public:
        explicit OutputTarget(const std::string &path)
        {
            if (!path.empty())
            {
                file_.open(path);
                if (!file_)
                    throw fldma::io_error("cannot open output file '" + path + "'");
            }
        }
        std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

    private:
        std::ofstream file_;
    };

    void echo_config(fldma::CsvWriter &csv, const fldma::Config &cfg)
    {
        for (const auto &[key, value] : cfg.resolved())
            csv.comment(key, value);
    }

    struct ResultRow
    {
        std::string label;
        double sweep_value;
        std::string scheme;
        double mean;
        double std_err;
        double ci95;
        std::optional<double> bound;
    };

    void emit_result_rows(std::ostream &out, const fldma::Config &cfg,
                          const std::vector<ResultRow> &rows, const std::string &format)
    {
        if (format == "pretty")
        {
            out << std::left << std::setw(10) << "label" << std::setw(14) << "value"
                << std::setw(14) << "scheme" << std::right << std::setw(14) << "mean_se"
                << std::setw(12) << "stderr" << std::setw(12) << "ci95"
                << std::setw(14) << "bound" << "\n";
            for (const auto &r : rows)
            {
                out << std::left << std::setw(10) << r.label << std::setw(14)
                    << fldma::format_double(r.sweep_value) << std::setw(14) << r.scheme
                    << std::right << std::setw(14) << fldma::format_double(r.mean)
                    << std::setw(12) << fldma::format_double(r.std_err) << std::setw(12)
                    << fldma::format_double(r.ci95) << std::setw(14)
                    << (r.bound ? fldma::format_double(*r.bound) : "-") << "\n";
            }
            return;
        }
        fldma::CsvWriter csv(out);
        echo_config(csv, cfg);
        csv.columns({"label", "sweep_value", "scheme", "mean_se", "stderr", "ci95", "bound"});
        for (const auto &r : rows)
            csv.row(std::vector<std::string>{r.label, fldma::format_double(r.sweep_value),
                                             r.scheme, fldma::format_double(r.mean),
                                             fldma::format_double(r.std_err),
                                             fldma::format_double(r.ci95),
                                             r.bound ? fldma::format_double(*r.bound) : ""});
    }

    void collect_rows(std::vector<ResultRow> &rows, const std::string &label,
                      const fldma::SweepSpec &spec, const fldma::SweepResult &result)
    {
        for (const auto &point : result.points)
            for (const auto scheme : spec.schemes)
            {
                const auto &st = point.stats.at(scheme);
                ResultRow row{label, point.value, fldma::to_string(scheme),
                              st.mean, st.std_err, st.ci95, std::nullopt};
                if (fldma::is_fldma(scheme))
                    row.bound = point.fldma_bound;
                rows.push_back(row);
            }
    }

    int cmd_beampattern(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        fldma::Scenario scenario = fldma::scenario_from_config(cfg);
        if (opt.seed)
            scenario.seed = *opt.seed;

        const double focus_r = cfg.get_number("beampattern", "focus_r_m", 1500.0);
        const double focus_deg = cfg.get_number("beampattern", "focus_theta_deg", 0.0);
        const double r_min = cfg.get_number("beampattern", "r_min_m", 0.0);
        const double r_max = cfg.get_number("beampattern", "r_max_m", 3000.0);
        const auto r_points = cfg.get_index("beampattern", "r_points", 201);
        const double t_min = cfg.get_number("beampattern", "theta_min_deg", -60.0);
        const double t_max = cfg.get_number("beampattern", "theta_max_deg", 60.0);
        const auto t_points = cfg.get_index("beampattern", "theta_points", 121);
        cfg.ensure_all_consumed();

        if (r_points < 1 || t_points < 1)
            throw fldma::precondition_error("beampattern: grids need at least one point");

        const fldma::OffsetPlan plan = scenario.make_plan(scenario.seed);
        const arma::vec r_grid = arma::linspace(r_min, r_max, r_points);
        const arma::vec t_grid_deg = arma::linspace(t_min, t_max, t_points);
        const fldma::PolarLocation focus{focus_r, fldma::deg_to_rad(focus_deg)};
        const arma::mat pattern =
            fldma::beampattern(plan, focus, r_grid, fldma::deg_to_rad(1.0) * t_grid_deg);

        // measured -3 dB width along distance at the focus angle, reported
        // next to the c/((M-1) delta_f) kernel width
        double width_measured = std::numeric_limits<double>::quiet_NaN();
        {
            arma::uword jf = 0;
            (arma::abs(t_grid_deg - focus_deg)).min(jf);
            const arma::vec cut = pattern.col(jf);
            arma::uword imax = 0;
            cut.max(imax);
            const double half = cut(imax) / std::sqrt(2.0);
            arma::uword lo = imax, hi = imax;
            while (lo > 0 && cut(lo - 1) >= half)
                lo--;
            while (hi + 1 < cut.n_elem && cut(hi + 1) >= half)
                hi++;
            if (lo > 0 && hi + 1 < cut.n_elem)
                width_measured = r_grid(hi) - r_grid(lo);
        }

        OutputTarget target(opt.output_path);
        fldma::CsvWriter csv(target.stream());
        echo_config(csv, cfg);
        if (plan.delta_f_hz > 0.0 && plan.size() > 1)
        {
            const double width_formula =
                fldma::speed_of_light /
                (static_cast<double>(plan.size() - 1) * plan.delta_f_hz);
            csv.comment("distance_width_formula_m", fldma::format_double(width_formula));
            csv.comment("distance_period_m",
                        fldma::format_double(fldma::speed_of_light / plan.delta_f_hz));
        }
        if (std::isfinite(width_measured))
            csv.comment("distance_width_3db_measured_m", fldma::format_double(width_measured));
        csv.columns({"distance_m", "angle_deg", "magnitude"});
        for (arma::uword i = 0; i < r_grid.n_elem; i++)
            for (arma::uword j = 0; j < t_grid_deg.n_elem; j++)
                csv.row(std::vector<double>{r_grid(i), t_grid_deg(j), pattern(i, j)});
        return 0;
    }

    int cmd_correlation_stats(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        const auto m = cfg.get_index("correlation", "elements", 128);
        const double p_min = cfg.get_number("correlation", "p_min", -0.05);
        const double p_max = cfg.get_number("correlation", "p_max", 0.05);
        const auto p_points = cfg.get_index("correlation", "p_points", 21);
        const double q_min = cfg.get_number("correlation", "q_min", -0.05);
        const double q_max = cfg.get_number("correlation", "q_max", 0.05);
        const auto q_points = cfg.get_index("correlation", "q_points", 21);
        auto shuffles = cfg.get_index("correlation", "shuffles", 1000);
        std::uint64_t seed = cfg.get_index("correlation", "seed", 1);
        cfg.ensure_all_consumed();
        if (opt.trials)
            shuffles = *opt.trials;
        if (opt.seed)
            seed = *opt.seed;

        const arma::vec ps = arma::linspace(p_min, p_max, p_points);
        const arma::vec qs = arma::linspace(q_min, q_max, q_points);

        OutputTarget target(opt.output_path);
        fldma::CsvWriter csv(target.stream());
        echo_config(csv, cfg);
        csv.columns({"p", "q", "mean_re", "mean_im", "var", "oracle_mean_re", "oracle_mean_im",
                     "oracle_var", "stderr"});
        for (arma::uword i = 0; i < ps.n_elem; i++)
            for (arma::uword j = 0; j < qs.n_elem; j++)
            {
                const auto mean = fldma::correlation_mean(ps(i), qs(j), m);
                const double var = fldma::correlation_var(ps(i), qs(j), m);
                const auto oracle = fldma::lemma1_oracle(
                    ps(i), qs(j), m, shuffles, fldma::Rng::derive(seed, i, j));
                csv.row(std::vector<double>{ps(i), qs(j), mean.real(), mean.imag(), var,
                                            oracle.mean.real(), oracle.mean.imag(),
                                            oracle.variance, oracle.mean_std_err});
            }
        return 0;
    }

    int cmd_ici_check(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        fldma::Scenario scenario = fldma::scenario_from_config(cfg);
        const std::vector<double> rhos =
            cfg.get_list("ici", "rho_values", {1.0 / 50.0, 1.0 / 20.0, 1.0 / 10.0});
        cfg.ensure_all_consumed();
        if (opt.seed)
            scenario.seed = *opt.seed;

        OutputTarget target(opt.output_path);
        fldma::CsvWriter csv(target.stream());
        echo_config(csv, cfg);
        csv.columns({"rho_max", "frobenius_error", "max_alpha_dev", "max_beta"});
        for (const double rho : rhos)
        {
            const fldma::OffsetPlan plan = fldma::generate_offsets_rho(
                scenario.scheme, scenario.geometry.num_elements, rho,
                scenario.grid.subcarrier_spacing_hz, scenario.seed);
            const double err = fldma::slight_offset_error(plan, scenario.grid);

            double max_alpha_dev = 0.0;
            double max_beta = 0.0;
            const arma::uword n = scenario.grid.num_subcarriers;
            for (arma::uword am = 0; am < plan.size(); am++)
            {
                const double r = plan.offsets_hz(am) / scenario.grid.subcarrier_spacing_hz;
                max_alpha_dev = std::max(max_alpha_dev,
                                         std::abs(fldma::ici_alpha(r, n) - fldma::cx_double(1.0, 0.0)));
                for (arma::sword d = 1; d < static_cast<arma::sword>(n); d++)
                {
                    max_beta = std::max(max_beta, std::abs(fldma::ici_beta(d, 0, r, n)));
                    max_beta = std::max(max_beta, std::abs(fldma::ici_beta(-d, 0, r, n)));
                }
            }
            csv.row(std::vector<double>{rho, err, max_alpha_dev, max_beta});
        }
        return 0;
    }

    int cmd_simulate(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        fldma::SweepSpec spec;
        spec.base = fldma::scenario_from_config(cfg);
        cfg.ensure_all_consumed();
        if (opt.trials)
            spec.base.trials = *opt.trials;
        if (opt.seed)
            spec.base.seed = *opt.seed;
        // a single-point sweep over the configured SNR
        spec.parameter = fldma::SweptParameter::snr_db;
        spec.values = {spec.base.snr_db};
        spec.schemes = spec.base.precoder == fldma::PrecoderKind::mmse
                           ? std::vector<fldma::SchemeUnderTest>{fldma::SchemeUnderTest::fldma_mmse,
                                                                 fldma::SchemeUnderTest::sdma_mmse}
                           : std::vector<fldma::SchemeUnderTest>{fldma::SchemeUnderTest::fldma_zf,
                                                                 fldma::SchemeUnderTest::sdma_zf};

        const auto result = fldma::monte_carlo(spec, resolve_workers(opt));
        std::vector<ResultRow> rows;
        collect_rows(rows, "simulate", spec, result);
        OutputTarget target(opt.output_path);
        emit_result_rows(target.stream(), cfg, rows, opt.format);
        return 0;
    }

    int cmd_sweep(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        fldma::SweepSpec spec = fldma::sweep_from_config(cfg);
        cfg.ensure_all_consumed();
        if (opt.trials)
            spec.base.trials = *opt.trials;
        if (opt.seed)
            spec.base.seed = *opt.seed;

        const auto result = fldma::monte_carlo(spec, resolve_workers(opt));
        std::vector<ResultRow> rows;
        collect_rows(rows, "sweep", spec, result);
        OutputTarget target(opt.output_path);
        emit_result_rows(target.stream(), cfg, rows, opt.format);
        return 0;
    }

    int cmd_bounds(const CommonOptions &opt)
    {
        fldma::Config cfg = load_config(opt);
        fldma::SweepSpec spec = fldma::sweep_from_config(cfg);
        cfg.ensure_all_consumed();

        OutputTarget target(opt.output_path);
        fldma::CsvWriter csv(target.stream());
        echo_config(csv, cfg);
        csv.columns({"sweep_value", "bound_kind", "bound"});
        for (const double value : spec.values)
        {
            const fldma::Scenario s = fldma::apply_parameter(spec.base, spec.parameter, value);
            if (s.num_ues == 2)
            {
                const double b = fldma::two_ue_bound(s.snr_linear(), s.geometry.num_elements,
                                                     s.grid.num_subcarriers, s.overhead_rho());
                csv.row(std::vector<std::string>{fldma::format_double(value), "two_ue",
                                                 fldma::format_double(b)});
            }
            else
            {
                const auto b = fldma::multi_ue_bound(s.snr_linear(), s.geometry.num_elements,
                                                     s.num_ues, s.grid.num_subcarriers,
                                                     s.overhead_rho());
                csv.row(std::vector<std::string>{fldma::format_double(value), "multi_ue",
                                                 b ? fldma::format_double(*b) : "n/a"});
            }
        }
        return 0;
    }

    int cmd_preset(const CommonOptions &opt, const std::string &name)
    {
        fldma::Config cfg = load_config(opt);
        cfg.ensure_all_consumed();

        fldma::Preset preset = fldma::make_preset(name);
        std::vector<ResultRow> rows;
        for (auto &run : preset.runs)
        {
            if (opt.trials)
                run.spec.base.trials = *opt.trials;
            if (opt.seed)
                run.spec.base.seed = *opt.seed;
            const auto result = fldma::monte_carlo(run.spec, resolve_workers(opt));
            collect_rows(rows, run.label, run.spec, result);
        }

        OutputTarget target(opt.output_path);
        if (opt.format == "csv")
        {
            fldma::CsvWriter csv(target.stream());
            echo_config(csv, cfg);
            csv.comment("preset", preset.name);
            csv.comment("description", preset.description);
            csv.columns({"label", "sweep_value", "scheme", "mean_se", "stderr", "ci95", "bound"});
            for (const auto &r : rows)
                csv.row(std::vector<std::string>{r.label, fldma::format_double(r.sweep_value),
                                                 r.scheme, fldma::format_double(r.mean),
                                                 fldma::format_double(r.std_err),
                                                 fldma::format_double(r.ci95),
                                                 r.bound ? fldma::format_double(*r.bound) : ""});
        }
        else
        {
            emit_result_rows(target.stream(), cfg, rows, opt.format);
        }
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    // library solves are small; keep BLAS single-threaded under our pool
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"FDA-MIMO-OFDM location-division multiple access simulator"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string preset_name;

    auto *beam = app.add_subcommand("beampattern", "distance-angle beampattern of an offset plan");
    add_common(beam, opt);
    auto *corr = app.add_subcommand("correlation-stats",
                                    "beam-correlation moments vs the permutation oracle");
    add_common(corr, opt);
    auto *ici = app.add_subcommand("ici-check", "inter-carrier-interference levels per rho_max");
    add_common(ici, opt);
    auto *sim = app.add_subcommand("simulate", "single-scenario spectral efficiency");
    add_common(sim, opt);
    auto *sweep = app.add_subcommand("sweep", "spectral-efficiency parameter sweep");
    add_common(sweep, opt);
    auto *bounds = app.add_subcommand("bounds", "closed-form rate bounds along a sweep");
    add_common(bounds, opt);
    auto *preset = app.add_subcommand("preset", "run a named experiment preset");
    preset->add_option("name", preset_name, "preset name (fig6a..fig12)")->required();
    add_common(preset, opt);

    try
    {
        app.parse(argc, argv);
        if (beam->parsed())
            return cmd_beampattern(opt);
        if (corr->parsed())
            return cmd_correlation_stats(opt);
        if (ici->parsed())
            return cmd_ici_check(opt);
        if (sim->parsed())
            return cmd_simulate(opt);
        if (sweep->parsed())
            return cmd_sweep(opt);
        if (bounds->parsed())
            return cmd_bounds(opt);
        if (preset->parsed())
            return cmd_preset(opt, preset_name);
        return 1;
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    catch (const fldma::config_error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const fldma::io_error &e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    }
    catch (const fldma::precondition_error &e)
    {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
