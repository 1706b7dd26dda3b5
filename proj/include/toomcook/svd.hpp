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
#include <limits>
#include <vector>

#include "toomcook/matrix.hpp"

namespace toomcook {

struct SvdResult {
    std::vector<double> singular_values; // descending, min(rows, cols) of them
    int sweeps = 0;
    bool converged = false;
};

/// Singular values by one-sided Jacobi (Hestenes) rotations applied to the
/// columns of the taller orientation of m. Sweeps stop once every column pair
/// is orthogonal to the relative tolerance.
inline SvdResult singular_values(const Matrix<double>& m, double tolerance = 1e-12, int max_sweeps = 100) {
    // Work on W with rows >= cols; its column norms become the singular values.
    const bool wide = m.cols() > m.rows();
    const Matrix<double> w0 = wide ? m.transposed() : m;
    const std::size_t rows = w0.rows();
    const std::size_t cols = w0.cols();
    std::vector<std::vector<double>> col(cols, std::vector<double>(rows));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            col[c][r] = w0(r, c);

    SvdResult out;
    for (out.sweeps = 1; out.sweeps <= max_sweeps; ++out.sweeps) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < cols; ++i)
            for (std::size_t j = i + 1; j < cols; ++j) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += col[i][k] * col[i][k];
                    beta += col[j][k] * col[j][k];
                    gamma += col[i][k] * col[j][k];
                }
                if (gamma == 0 || std::abs(gamma) <= tolerance * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < rows; ++k) {
                    const double a = col[i][k];
                    const double b = col[j][k];
                    col[i][k] = c * a - s * b;
                    col[j][k] = s * a + c * b;
                }
            }
        if (!rotated) {
            out.converged = true;
            break;
        }
    }
    for (const auto& v : col) {
        double s = 0;
        for (double e : v)
            s += e * e;
        out.singular_values.push_back(std::sqrt(s));
    }
    std::sort(out.singular_values.begin(), out.singular_values.end(), std::greater<>());
    return out;
}

/// sigma_max / sigma_min, or +inf when the smallest singular value is zero
/// to working accuracy.
inline double condition_number_2(const Matrix<double>& m, double tolerance = 1e-12) {
    const auto svd = singular_values(m, tolerance);
    if (svd.singular_values.empty())
        return std::numeric_limits<double>::infinity();
    const double smax = svd.singular_values.front();
    const double smin = svd.singular_values.back();
    const double floor = smax * static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon();
    if (!(smin > floor))
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

} // namespace toomcook
