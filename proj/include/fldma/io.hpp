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

#ifndef FLDMA_IO_HPP
#define FLDMA_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "fldma/common.hpp"

namespace fldma
{
    // Locale-independent decimal text, 12 significant digits
    std::string format_double(double value);

    // CSV emitter: '#' comment block carrying the resolved configuration, a
    // versioned schema line, then plain comma-separated rows.
    class CsvWriter
    {
    public:
        explicit CsvWriter(std::ostream &out);

        void comment(const std::string &key, const std::string &value);
        void columns(const std::vector<std::string> &names);
        void row(const std::vector<std::string> &cells);
        void row(const std::vector<double> &cells);

    private:
        std::ostream &out_;
        bool columns_written_ = false;
    };

    // Golden-vector files: complex samples as (index, re, im) rows
    void save_complex_csv(const std::string &path, const cx_vec &values);
    cx_vec load_complex_csv(const std::string &path);

} // namespace fldma

#endif
