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

#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/matrix.hpp"
#include "toomcook/rational.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook::exact {

// Exact-arithmetic reference pipelines. Rationals only; no rounding anywhere.

using Vector = std::vector<Rational>;

/// Valid-region correlation y_k = sum_j h_j x_{k+j}.
inline Vector direct_1d(const Vector& h, const Vector& x) {
    if (h.empty() || x.size() < h.size())
        throw ValidationError("direct_1d: input shorter than kernel");
    const std::size_t no = x.size() - h.size() + 1;
    Vector y(no);
    for (std::size_t k = 0; k < no; ++k)
        for (std::size_t j = 0; j < h.size(); ++j)
            y[k] += h[j] * x[k + j];
    return y;
}

inline Matrix<Rational> direct_2d(const Matrix<Rational>& H, const Matrix<Rational>& X) {
    if (H.rows() != H.cols() || X.rows() != X.cols() || X.rows() < H.rows())
        throw ValidationError("direct_2d: shape mismatch");
    const std::size_t nh = H.rows();
    const std::size_t no = X.rows() - nh + 1;
    Matrix<Rational> Y(no, no);
    for (std::size_t k = 0; k < no; ++k)
        for (std::size_t l = 0; l < no; ++l)
            for (std::size_t i = 0; i < nh; ++i)
                for (std::size_t j = 0; j < nh; ++j)
                    Y(k, l) += H(i, j) * X(k + i, l + j);
    return Y;
}

/// A^T (G h (.) B^T x) in exact arithmetic.
inline Vector toom_cook_1d(const TransformSet& ts, const Vector& h, const Vector& x) {
    if (h.size() != static_cast<std::size_t>(ts.kernel_size) || x.size() != static_cast<std::size_t>(ts.input_size))
        throw ValidationError("toom_cook_1d: input sizes do not match the transform set");
    Vector u = ts.G * h;
    const Vector v = ts.BT * x;
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] *= v[i];
    return ts.AT * u;
}

/// A^T (G H G^T (.) B^T X B) A in exact arithmetic.
inline Matrix<Rational> toom_cook_2d(const TransformSet& ts, const Matrix<Rational>& H, const Matrix<Rational>& X) {
    if (H.rows() != static_cast<std::size_t>(ts.kernel_size) || H.cols() != H.rows() ||
        X.rows() != static_cast<std::size_t>(ts.input_size) || X.cols() != X.rows())
        throw ValidationError("toom_cook_2d: input sizes do not match the transform set");
    const Matrix<Rational> U = ts.G * H * ts.G.transposed();
    const Matrix<Rational> V = ts.BT * X * ts.BT.transposed();
    Matrix<Rational> P(U.rows(), U.cols());
    for (std::size_t i = 0; i < P.rows(); ++i)
        for (std::size_t j = 0; j < P.cols(); ++j)
            P(i, j) = U(i, j) * V(i, j);
    return ts.AT * P * ts.AT.transposed();
}

/// The bilinear form of the triple, T[k][j][m] = sum_i A^T[k][i] G[i][j] B^T[i][m],
/// equals [m == k + j] for every (k, j, m) iff the triple computes the
/// correlation exactly for all inputs.
inline bool bilinear_form_is_correlation(const TransformSet& ts) {
    const auto no = static_cast<std::size_t>(ts.output_size);
    const auto nh = static_cast<std::size_t>(ts.kernel_size);
    const auto n = static_cast<std::size_t>(ts.input_size);
    for (std::size_t k = 0; k < no; ++k)
        for (std::size_t j = 0; j < nh; ++j)
            for (std::size_t m = 0; m < n; ++m) {
                Rational t;
                for (std::size_t i = 0; i < n; ++i)
                    if (!ts.AT(k, i).is_zero() && !ts.G(i, j).is_zero() && !ts.BT(i, m).is_zero())
                        t += ts.AT(k, i) * ts.G(i, j) * ts.BT(i, m);
                if (t != Rational(m == k + j ? 1 : 0))
                    return false;
            }
    return true;
}

} // namespace toomcook::exact
