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

#ifndef FLDMA_RNG_HPP
#define FLDMA_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "fldma/common.hpp"

namespace fldma
{
    // Seeded generator with fully specified output streams. std::mt19937_64 is
    // pinned by the standard; the std:: distributions are not, so the few
    // distributions needed here are implemented on top of the raw 64-bit draws.
    // Every experiment stores its seed, so results replay bit-identically.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        std::uint64_t next_u64() { return engine_(); }

        // Uniform double in [0, 1) with 53 random bits
        double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Uniform integer in [0, n), rejection sampled to avoid modulo bias
        std::uint64_t uniform_below(std::uint64_t n);

        // Standard normal via the Marsaglia polar method
        double normal();

        // Circularly-symmetric complex Gaussian with E[|z|^2] = variance
        cx_double complex_normal(double variance);

        // In-place Fisher-Yates shuffle
        template <typename T>
        void shuffle(std::vector<T> &v)
        {
            for (std::size_t i = v.size(); i > 1; i--)
            {
                std::size_t j = static_cast<std::size_t>(uniform_below(i));
                std::swap(v[i - 1], v[j]);
            }
        }

        // Derive an independent stream seed from a base seed and up to two
        // stream indices (splitmix64 finalizer chain).
        static std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

    private:
        std::mt19937_64 engine_;
        double spare_normal_ = 0.0;
        bool has_spare_ = false;
    };

} // namespace fldma

#endif
