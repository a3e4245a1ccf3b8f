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

#ifndef FLDMA_COMMON_HPP
#define FLDMA_COMMON_HPP

#include <armadillo>
#include <complex>
#include <stdexcept>
#include <string>

namespace fldma
{
    using arma::cx_double;
    using arma::cx_mat;
    using arma::cx_vec;

    constexpr double speed_of_light = 299792458.0; // m/s, exact by definition
    constexpr double pi = 3.141592653589793238462643383279502884;
    constexpr double two_pi = 2.0 * pi;

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // Error categories map to CLI exit codes: config_error -> 1,
    // precondition_error (and std::invalid_argument/domain_error) -> 2,
    // io_error -> 3.
    struct config_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct precondition_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct io_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

} // namespace fldma

#endif
