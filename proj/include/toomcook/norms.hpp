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

#include <algorithm>
#include <cmath>
#include <span>

#include "toomcook/matrix.hpp"
#include "toomcook/rational.hpp"

namespace toomcook {

struct MatrixNorms {
    double one_norm = 0;  // max column sum of |m_ij|
    double frobenius = 0; // sqrt(sum m_ij^2)
};

inline double one_norm(const Matrix<double>& m) {
    double best = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double s = 0;
        for (std::size_t r = 0; r < m.rows(); ++r)
            s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

inline double frobenius_norm(const Matrix<double>& m) {
    double s = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (double v : m.row(r))
            s += v * v;
    return std::sqrt(s);
}

inline MatrixNorms matrix_norms(const Matrix<double>& m) { return {one_norm(m), frobenius_norm(m)}; }

inline double vector_one_norm(std::span<const double> v) {
    double s = 0;
    for (double e : v)
        s += std::abs(e);
    return s;
}

inline double vector_two_norm(std::span<const double> v) {
    double s = 0;
    for (double e : v)
        s += e * e;
    return std::sqrt(s);
}

/// Nearest-double copy of an exact matrix.
inline Matrix<double> to_double(const Matrix<Rational>& m) {
    return m.map([](const Rational& r) { return to_nearest<double>(r); });
}

inline Matrix<double> abs(const Matrix<double>& m) {
    return m.map([](double v) { return std::abs(v); });
}

} // namespace toomcook
