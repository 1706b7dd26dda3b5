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

#include <cmath>
#include <numbers>
#include <type_traits>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/matrix.hpp"
#include "toomcook/point.hpp"
#include "toomcook/polynomial.hpp"
#include "toomcook/rational.hpp"

namespace toomcook {

/// The (A^T, G, B^T) triple of one fixed-size Toom-Cook correlation:
///
///     y = A^T (G h (.) B^T x),   h: n_h taps, x: n inputs, y: n_o outputs,
///
/// with n = n_h + n_o - 1 points. Matrices are held exactly and rounded to
/// nearest in fp64 and fp32. Immutable after construction.
struct TransformSet {
    int kernel_size = 0; // n_h
    int output_size = 0; // n_o
    int input_size = 0;  // n
    std::vector<Point> points;
    bool modified = false;

    Matrix<Rational> AT; // n_o x n
    Matrix<Rational> G;  // n x n_h
    Matrix<Rational> BT; // n x n

    // Square n x n systems before trimming rows of A^T / columns of G.
    Matrix<Rational> AT_square;
    Matrix<Rational> G_square;

    Matrix<double> AT64, G64, BT64;
    Matrix<float> AT32, G32, BT32;

    template <typename T>
    [[nodiscard]] const Matrix<T>& at() const {
        if constexpr (std::is_same_v<T, float>)
            return AT32;
        else
            return AT64;
    }
    template <typename T>
    [[nodiscard]] const Matrix<T>& g() const {
        if constexpr (std::is_same_v<T, float>)
            return G32;
        else
            return G64;
    }
    template <typename T>
    [[nodiscard]] const Matrix<T>& bt() const {
        if constexpr (std::is_same_v<T, float>)
            return BT32;
        else
            return BT64;
    }
};

namespace detail {

inline Rational power(const Rational& p, std::size_t k) { return p.pow(static_cast<unsigned>(k)); }

struct FiniteSystem {
    Matrix<Rational> AT, G, BT, AT_square, G_square;
    Polynomial M; // prod (a - p_k)
};

// Toom-Cook construction over m distinct finite points.
inline FiniteSystem build_finite(int n_h, int n_o, const std::vector<Rational>& p) {
    const std::size_t m = p.size();
    FiniteSystem s;

    std::vector<Polynomial> factors;
    factors.reserve(m);
    for (const auto& v : p)
        factors.push_back(Polynomial::linear(v));
    s.M = poly_product(factors);

    std::vector<Rational> N(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational denom(1);
        for (std::size_t j = 0; j < m; ++j)
            if (j != i)
                denom *= p[i] - p[j];
        N[i] = Rational(1) / denom;
    }

    s.AT_square = Matrix<Rational>(m, m);
    s.G_square = Matrix<Rational>(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            s.AT_square(i, j) = power(p[j], i);
            s.G_square(i, j) = power(p[i], j) * N[i];
        }

    s.AT = Matrix<Rational>(static_cast<std::size_t>(n_o), m);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_o); ++i)
        for (std::size_t j = 0; j < m; ++j)
            s.AT(i, j) = power(p[j], i);

    s.G = Matrix<Rational>(m, static_cast<std::size_t>(n_h));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(n_h); ++j)
            s.G(i, j) = power(p[i], j) * N[i];

    // Row i of B^T holds the ascending coefficients of M_i(a) = M(a) / (a - p_i).
    s.BT = Matrix<Rational>(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Polynomial> others;
        for (std::size_t k = 0; k < m; ++k)
            if (k != i)
                others.push_back(factors[k]);
        const Polynomial Mi = others.empty() ? Polynomial({Rational(1)}) : poly_product(others);
        for (std::size_t j = 0; j < m; ++j)
            s.BT(i, j) = Mi.coefficient(j);
    }
    return s;
}

inline void round_matrices(TransformSet& ts) {
    ts.AT64 = ts.AT.map([](const Rational& r) { return to_nearest<double>(r); });
    ts.G64 = ts.G.map([](const Rational& r) { return to_nearest<double>(r); });
    ts.BT64 = ts.BT.map([](const Rational& r) { return to_nearest<double>(r); });
    ts.AT32 = ts.AT.map([](const Rational& r) { return to_nearest<float>(r); });
    ts.G32 = ts.G.map([](const Rational& r) { return to_nearest<float>(r); });
    ts.BT32 = ts.BT.map([](const Rational& r) { return to_nearest<float>(r); });
}

inline void check_sizes(int n_h, int n_o, std::size_t count) {
    if (n_h < 1 || n_o < 1)
        throw ValidationError("kernel and output sizes must be >= 1");
    const auto n = static_cast<std::size_t>(n_h + n_o - 1);
    if (count != n)
        throw ValidationError("expected " + std::to_string(n) + " points for n_h=" + std::to_string(n_h) +
                              ", n_o=" + std::to_string(n_o) + ", got " + std::to_string(count));
}

} // namespace detail

/// Toom-Cook triple from n = n_h + n_o - 1 distinct finite points, in the
/// correlation convention (no column reversal).
inline TransformSet build_toom_cook(int n_h, int n_o, const std::vector<Point>& points) {
    require_distinct(points);
    for (const auto& p : points)
        if (p.is_infinity())
            throw ValidationError("infinity requires the modified construction");
    detail::check_sizes(n_h, n_o, points.size());

    std::vector<Rational> values;
    for (const auto& p : points)
        values.push_back(p.value());
    auto sys = detail::build_finite(n_h, n_o, values);

    TransformSet ts;
    ts.kernel_size = n_h;
    ts.output_size = n_o;
    ts.input_size = n_h + n_o - 1;
    ts.points = points;
    ts.modified = false;
    ts.AT = std::move(sys.AT);
    ts.G = std::move(sys.G);
    ts.BT = std::move(sys.BT);
    ts.AT_square = std::move(sys.AT_square);
    ts.G_square = std::move(sys.G_square);
    detail::round_matrices(ts);
    return ts;
}

/// Modified Toom-Cook: n - 1 finite points plus the infinity pseudo-point.
/// The (n-1)-point triple is embedded and extended by the infinity
/// row/column; the last row of B^T holds the coefficients of M'(a).
/// Infinity is moved to the last position.
inline TransformSet build_modified(int n_h, int n_o, const std::vector<Point>& points) {
    int infinities = 0;
    for (const auto& p : points)
        infinities += p.is_infinity() ? 1 : 0;
    if (infinities != 1)
        throw ValidationError("the modified construction needs exactly one infinity point, got " +
                              std::to_string(infinities));
    require_distinct(points);
    detail::check_sizes(n_h, n_o, points.size());
    const auto n = static_cast<std::size_t>(n_h + n_o - 1);
    if (n < 2)
        throw ValidationError("the modified construction needs at least two points");

    std::vector<Point> ordered;
    std::vector<Rational> finite;
    for (const auto& p : points)
        if (p.is_finite()) {
            ordered.push_back(p);
            finite.push_back(p.value());
        }
    ordered.push_back(Point::infinity());

    auto sys = detail::build_finite(n_h, n_o, finite);
    const std::size_t m = n - 1;
    const auto nh = static_cast<std::size_t>(n_h);
    const auto no = static_cast<std::size_t>(n_o);

    TransformSet ts;
    ts.kernel_size = n_h;
    ts.output_size = n_o;
    ts.input_size = static_cast<int>(n);
    ts.points = std::move(ordered);
    ts.modified = true;

    ts.AT = Matrix<Rational>(no, n);
    for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < m; ++j)
            ts.AT(i, j) = sys.AT(i, j);
    ts.AT(no - 1, m) = Rational(1);

    ts.G = Matrix<Rational>(n, nh);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < nh; ++j)
            ts.G(i, j) = sys.G(i, j);
    ts.G(m, nh - 1) = Rational(1);

    ts.BT = Matrix<Rational>(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            ts.BT(i, j) = sys.BT(i, j);
    for (std::size_t j = 0; j < n; ++j)
        ts.BT(m, j) = sys.M.coefficient(j);

    ts.AT_square = Matrix<Rational>(n, n);
    ts.G_square = Matrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            ts.AT_square(i, j) = detail::power(finite[j], i);
            ts.G_square(j, i) = detail::power(finite[j], i) * sys.G(j, 0);
        }
    ts.AT_square(n - 1, m) = Rational(1);
    ts.G_square(m, n - 1) = Rational(1);

    detail::round_matrices(ts);
    return ts;
}

/// Dispatches on the presence of the infinity point.
inline TransformSet build_transform_set(int n_h, int n_o, const std::vector<Point>& points) {
    for (const auto& p : points)
        if (p.is_infinity())
            return build_modified(n_h, n_o, points);
    return build_toom_cook(n_h, n_o, points);
}

/// Chebyshev nodes cos((2k-1)pi/(2n)), k = 1..n, rounded to fp64 and held
/// as the exact rational value of that double. The nonnegative half is
/// evaluated and mirrored, so the set is exactly symmetric and the middle
/// node of an odd set is exactly 0.
inline std::vector<Point> chebyshev_points(int n) {
    if (n < 1)
        throw ValidationError("chebyshev_points needs n >= 1");
    std::vector<Point> out(static_cast<std::size_t>(n));
    for (int k = 1; 2 * k <= n; ++k) {
        const double v = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
        out[static_cast<std::size_t>(k - 1)] = Point(Rational::from_float(v));
        out[static_cast<std::size_t>(n - k)] = Point(Rational::from_float(-v));
    }
    if (n % 2 == 1)
        out[static_cast<std::size_t>(n / 2)] = Point(0);
    return out;
}

/// General multiplications of one Toom-Cook block (the Hadamard stage).
struct MultCount {
    int kernel_size = 0;
    int output_size = 0;
    int dims = 1;
    long general_mults = 0;
    Rational mults_per_output;
};

inline MultCount mult_count(int n_h, int n_o, int dims) {
    if (n_h < 1 || n_o < 1)
        throw ValidationError("mult_count needs n_h >= 1 and n_o >= 1");
    if (dims != 1 && dims != 2)
        throw ValidationError("dims must be 1 or 2");
    const long n = n_h + n_o - 1;
    MultCount mc;
    mc.kernel_size = n_h;
    mc.output_size = n_o;
    mc.dims = dims;
    mc.general_mults = dims == 1 ? n : n * n;
    const long outputs = dims == 1 ? n_o : static_cast<long>(n_o) * n_o;
    mc.mults_per_output = Rational(mpz_class(mc.general_mults), mpz_class(outputs));
    return mc;
}

} // namespace toomcook
