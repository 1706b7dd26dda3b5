/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <random>
#include <vector>

#include "toomcook/matrix.hpp"
#include "toomcook/rational.hpp"

namespace testing_support {

inline toomcook::Rational random_rational(std::mt19937_64& rng, long span = 9, long max_den = 7) {
    std::uniform_int_distribution<long> num(-span, span);
    std::uniform_int_distribution<long> den(1, max_den);
    return {mpz_class(num(rng)), mpz_class(den(rng))};
}

inline std::vector<toomcook::Rational> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::vector<toomcook::Rational> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(random_rational(rng));
    return v;
}

inline toomcook::Matrix<toomcook::Rational> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    toomcook::Matrix<toomcook::Rational> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = random_rational(rng);
    return m;
}

// fp64 copy of a vector of rationals; fails the caller if any entry is not
// exactly representable.
inline std::vector<double> to_doubles(const std::vector<toomcook::Rational>& v) {
    std::vector<double> out;
    for (const auto& r : v)
        out.push_back(toomcook::to_nearest<double>(r));
    return out;
}

} // namespace testing_support
