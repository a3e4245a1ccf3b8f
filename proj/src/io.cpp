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

#include "fldma/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fldma
{

    std::string format_double(double value)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                       std::chars_format::general, 12);
        return std::string(buf, res.ptr);
    }

    CsvWriter::CsvWriter(std::ostream &out) : out_(out)
    {
        out_ << "# fldma csv v1\n";
    }

    void CsvWriter::comment(const std::string &key, const std::string &value)
    {
        out_ << "# " << key << " = " << value << "\n";
    }

    void CsvWriter::columns(const std::vector<std::string> &names)
    {
        for (std::size_t i = 0; i < names.size(); i++)
            out_ << (i ? "," : "") << names[i];
        out_ << "\n";
        columns_written_ = true;
    }

    void CsvWriter::row(const std::vector<std::string> &cells)
    {
        if (!columns_written_)
            throw io_error("CsvWriter: emit the column header before rows");
        for (std::size_t i = 0; i < cells.size(); i++)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    void CsvWriter::row(const std::vector<double> &cells)
    {
        std::vector<std::string> text;
        text.reserve(cells.size());
        for (const double c : cells)
            text.push_back(format_double(c));
        row(text);
    }

    void save_complex_csv(const std::string &path, const cx_vec &values)
    {
        std::ofstream out(path);
        if (!out)
            throw io_error("cannot open '" + path + "' for writing");
        CsvWriter csv(out);
        csv.columns({"index", "re", "im"});
        for (arma::uword i = 0; i < values.n_elem; i++)
            csv.row(std::vector<double>{static_cast<double>(i), values(i).real(), values(i).imag()});
        if (!out)
            throw io_error("write to '" + path + "' failed");
    }

    cx_vec load_complex_csv(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw io_error("cannot open '" + path + "' for reading");

        std::vector<cx_double> values;
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            if (!header_seen)
            {
                header_seen = true; // column names
                continue;
            }
            std::istringstream ss(line);
            std::string idx, re, im;
            if (!std::getline(ss, idx, ',') || !std::getline(ss, re, ',') || !std::getline(ss, im))
                throw io_error("malformed row in '" + path + "': " + line);
            values.emplace_back(std::stod(re), std::stod(im));
        }
        return cx_vec(values);
    }

} // namespace fldma
