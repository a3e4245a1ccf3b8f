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

#ifndef FLDMA_CONFIG_HPP
#define FLDMA_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "fldma/channel.hpp"
#include "fldma/common.hpp"
#include "fldma/experiments.hpp"

namespace fldma
{
    // Sectioned key/value configuration. Every lookup falls back to a
    // default and is recorded, so the consumer can echo the fully resolved
    // configuration and reject keys nothing consumed (typo protection).
    class Config
    {
    public:
        static Config from_file(const std::string &path);
        Config() = default;

        // "section.key=value"
        void apply_override(const std::string &assignment);

        std::string get_string(const std::string &section, const std::string &key,
                               const std::string &fallback);
        double get_number(const std::string &section, const std::string &key, double fallback);
        arma::uword get_index(const std::string &section, const std::string &key,
                              arma::uword fallback);
        bool get_bool(const std::string &section, const std::string &key, bool fallback);
        std::vector<double> get_list(const std::string &section, const std::string &key,
                                     const std::vector<double> &fallback);

        bool has(const std::string &section, const std::string &key) const;

        // Throws config_error naming the first key that was never consumed
        void ensure_all_consumed() const;

        // Resolved (section.key, value) pairs in lookup order, defaults included
        const std::vector<std::pair<std::string, std::string>> &resolved() const
        {
            return resolved_;
        }

    private:
        std::string take(const std::string &section, const std::string &key,
                         const std::string &fallback);
        void record(const std::string &section, const std::string &key, const std::string &value);

        std::map<std::string, std::map<std::string, std::string>> values_;
        std::map<std::string, std::map<std::string, bool>> consumed_;
        std::vector<std::pair<std::string, std::string>> resolved_;
    };

    // Scenario from the [array]/[ofdm]/[plan]/[scenario]/[overhead] sections
    // with reference defaults; angles are degrees in the file, radians
    // internally.
    Scenario scenario_from_config(Config &cfg);

    // SweepSpec from [sweep] on top of the scenario sections
    SweepSpec sweep_from_config(Config &cfg);

} // namespace fldma

#endif
