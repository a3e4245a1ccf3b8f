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

#include "fldma/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fldma/io.hpp"

namespace fldma
{

    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto begin = s.find_first_not_of(" \t\r");
            if (begin == std::string::npos)
                return "";
            const auto end = s.find_last_not_of(" \t\r");
            return s.substr(begin, end - begin + 1);
        }

        double parse_number(const std::string &section, const std::string &key,
                            const std::string &text)
        {
            try
            {
                std::size_t pos = 0;
                const double v = std::stod(text, &pos);
                if (pos != text.size())
                    throw std::invalid_argument("");
                return v;
            }
            catch (const std::exception &)
            {
                throw config_error("value of " + section + "." + key + " is not a number: '" +
                                   text + "'");
            }
        }
    } // namespace

    Config Config::from_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw io_error("cannot open config file '" + path + "'");

        Config cfg;
        std::string line;
        std::string section = "scenario";
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            line_no++;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']')
                    throw config_error(path + ":" + std::to_string(line_no) +
                                       ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error(path + ":" + std::to_string(line_no) +
                                   ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw config_error(path + ":" + std::to_string(line_no) + ": empty key");
            cfg.values_[section][key] = value;
        }
        return cfg;
    }

    void Config::apply_override(const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw config_error("override '" + assignment + "' is not of the form section.key=value");
        const std::string path = trim(assignment.substr(0, eq));
        const std::string value = trim(assignment.substr(eq + 1));
        const auto dot = path.find('.');
        if (dot == std::string::npos)
            throw config_error("override key '" + path + "' needs a section prefix");
        values_[trim(path.substr(0, dot))][trim(path.substr(dot + 1))] = value;
    }

    void Config::record(const std::string &section, const std::string &key,
                        const std::string &value)
    {
        resolved_.emplace_back(section + "." + key, value);
    }

    std::string Config::take(const std::string &section, const std::string &key,
                             const std::string &fallback)
    {
        const auto sec = values_.find(section);
        if (sec != values_.end())
        {
            const auto it = sec->second.find(key);
            if (it != sec->second.end())
            {
                consumed_[section][key] = true;
                record(section, key, it->second);
                return it->second;
            }
        }
        record(section, key, fallback);
        return fallback;
    }

    std::string Config::get_string(const std::string &section, const std::string &key,
                                   const std::string &fallback)
    {
        return take(section, key, fallback);
    }

    double Config::get_number(const std::string &section, const std::string &key, double fallback)
    {
        const std::string text = take(section, key, format_double(fallback));
        return parse_number(section, key, text);
    }

    arma::uword Config::get_index(const std::string &section, const std::string &key,
                                  arma::uword fallback)
    {
        const double v = get_number(section, key, static_cast<double>(fallback));
        if (v < 0.0 || v != std::floor(v))
            throw config_error(section + "." + key + " must be a non-negative integer");
        return static_cast<arma::uword>(v);
    }

    bool Config::get_bool(const std::string &section, const std::string &key, bool fallback)
    {
        const std::string text = take(section, key, fallback ? "true" : "false");
        if (text == "true" || text == "1" || text == "yes")
            return true;
        if (text == "false" || text == "0" || text == "no")
            return false;
        throw config_error(section + "." + key + " must be a boolean, got '" + text + "'");
    }

    std::vector<double> Config::get_list(const std::string &section, const std::string &key,
                                         const std::vector<double> &fallback)
    {
        std::string fallback_text;
        for (std::size_t i = 0; i < fallback.size(); i++)
            fallback_text += (i ? "," : "") + format_double(fallback[i]);
        const std::string text = take(section, key, fallback_text);

        std::vector<double> out;
        std::istringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            item = trim(item);
            if (!item.empty())
                out.push_back(parse_number(section, key, item));
        }
        if (out.empty())
            throw config_error(section + "." + key + " is an empty list");
        return out;
    }

    bool Config::has(const std::string &section, const std::string &key) const
    {
        const auto sec = values_.find(section);
        return sec != values_.end() && sec->second.count(key) > 0;
    }

    void Config::ensure_all_consumed() const
    {
        for (const auto &[section, keys] : values_)
            for (const auto &[key, value] : keys)
            {
                const auto sec = consumed_.find(section);
                if (sec == consumed_.end() || !sec->second.count(key))
                    throw config_error("unknown configuration key '" + section + "." + key + "'");
            }
    }

    Scenario scenario_from_config(Config &cfg)
    {
        Scenario s;

        const arma::uword elements = cfg.get_index("array", "elements", 128);
        const double carrier_ghz = cfg.get_number("array", "carrier_freq_ghz", 30.0);
        if (carrier_ghz <= 0.0)
            throw config_error("array.carrier_freq_ghz must be positive");
        s.geometry = ArrayGeometry::half_wavelength(elements, carrier_ghz * 1e9);

        const arma::uword subcarriers = cfg.get_index("ofdm", "subcarriers", 512);
        const double spacing_khz = cfg.get_number("ofdm", "spacing_khz", 15.0);
        const double cp_fraction = cfg.get_number("ofdm", "cp_fraction", 0.25);
        if (cp_fraction <= 0.0 || cp_fraction >= 1.0)
            throw config_error("ofdm.cp_fraction must lie in (0, 1)");
        const auto cp_samples =
            static_cast<arma::uword>(std::floor(cp_fraction * static_cast<double>(subcarriers)));
        try
        {
            s.grid = OfdmGrid(subcarriers, spacing_khz * 1e3, cp_samples);
        }
        catch (const std::invalid_argument &e)
        {
            throw config_error(std::string("[ofdm] section: ") + e.what());
        }

        s.scheme = offset_scheme_from_string(
            cfg.get_string("plan", "scheme", "symmetric_random_permutation"));
        s.rho_max = cfg.get_number("plan", "rho_max", 30.0);
        if (s.rho_max < 0.0)
            throw config_error("plan.rho_max must be non-negative");

        s.num_ues = cfg.get_index("scenario", "ues", 2);
        s.theta_max_rad = deg_to_rad(cfg.get_number("scenario", "theta_max_deg", 60.0));
        s.r_max_m = cfg.get_number("scenario", "r_max_m", 3000.0);
        s.num_nlos_paths = cfg.get_index("scenario", "paths", 0);
        s.rician_kappa = cfg.get_number("scenario", "rician_kappa", 0.0);
        s.snr_db = cfg.get_number("scenario", "snr_db", 20.0);
        s.precoder = precoder_from_string(cfg.get_string("scenario", "precoder", "mmse"));
        s.trials = cfg.get_index("scenario", "trials", 10000);
        s.seed = cfg.get_index("scenario", "seed", 1);
        s.double_overhead_for_symmetric =
            cfg.get_bool("overhead", "double_for_symmetric", false);
        return s;
    }

    SweepSpec sweep_from_config(Config &cfg)
    {
        SweepSpec spec;
        spec.base = scenario_from_config(cfg);
        spec.parameter =
            swept_parameter_from_string(cfg.get_string("sweep", "parameter", "snr_db"));
        spec.values = cfg.get_list("sweep", "values", {0, 5, 10, 15, 20, 25, 30});

        const std::string schemes = cfg.get_string(
            "sweep", "schemes",
            spec.base.precoder == PrecoderKind::mmse ? "fldma_mmse,sdma_mmse" : "fldma_zf,sdma_zf");
        std::istringstream ss(schemes);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            const auto begin = item.find_first_not_of(" \t");
            const auto end = item.find_last_not_of(" \t");
            if (begin == std::string::npos)
                continue;
            spec.schemes.push_back(scheme_from_string(item.substr(begin, end - begin + 1)));
        }
        if (spec.schemes.empty())
            throw config_error("sweep.schemes is empty");
        return spec;
    }

} // namespace fldma
