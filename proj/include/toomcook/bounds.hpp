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
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toomcook/conv.hpp"
#include "toomcook/errors.hpp"
#include "toomcook/eval_tree.hpp"
#include "toomcook/norms.hpp"
#include "toomcook/svd.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

enum class SummationMethod { linear, huffman, custom };

/// How a matrix coefficient enters a product: rounded and multiplied
/// (general), multiplied exactly representable (exact), or a power of two
/// that adds no error at all.
enum class ElementClass { general, exact, power_of_two };

inline std::string_view to_string(SummationMethod m) {
    switch (m) {
    case SummationMethod::linear: return "linear";
    case SummationMethod::huffman: return "huffman";
    case SummationMethod::custom: return "custom";
    }
    return "?";
}
inline std::string_view to_string(ElementClass c) {
    switch (c) {
    case ElementClass::general: return "general";
    case ElementClass::exact: return "exact";
    case ElementClass::power_of_two: return "power_of_two";
    }
    return "?";
}

/// Dot-product error constants for A^T (alpha, length n), B^T (beta, n) and
/// G (gamma, n_h).
struct SummationConstants {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
    SummationMethod method = SummationMethod::linear;
    ElementClass element_class = ElementClass::general;
};

/// Rounding error of the product a_i x_i in units of eps.
inline int multiplication_term(ElementClass c) {
    switch (c) {
    case ElementClass::general: return 2;
    case ElementClass::exact: return 1;
    case ElementClass::power_of_two: return 0;
    }
    return 2;
}

/// Linear summation of length-n dot products: n + 1, n or n - 1.
inline double linear_constant(int n, ElementClass c) { return n - 1 + multiplication_term(c); }

/// Worst class over the nonzero entries, for coefficients rounded to T.
template <std::floating_point T>
ElementClass classify(const Matrix<Rational>& m) {
    ElementClass worst = ElementClass::power_of_two;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& v : m.row(r)) {
            if (v.is_zero() || v.is_power_of_two())
                continue;
            if (Rational::from_float(to_nearest<T>(v)) == v)
                worst = ElementClass::exact;
            else
                return ElementClass::general;
        }
    return worst;
}

inline ElementClass worse(ElementClass a, ElementClass b) {
    return multiplication_term(a) >= multiplication_term(b) ? a : b;
}

/// Tree depth plus the multiplication term, maximized over rows.
inline double huffman_constant(std::span<const EvalTree> trees, ElementClass c) {
    int depth = 0;
    for (const auto& t : trees)
        depth = std::max(depth, t.depth());
    return depth + multiplication_term(c);
}

struct TreeSet {
    std::span<const EvalTree> at, g, bt;
};

/// Constants with one element class for all three matrices. Huffman needs
/// the evaluation trees; custom keeps nothing but the method tag.
inline SummationConstants summation_constants(SummationMethod method, int n, int n_h, ElementClass cls,
                                              const std::optional<TreeSet>& trees = std::nullopt) {
    if (n < 1 || n_h < 1)
        throw ValidationError("summation_constants needs n >= 1 and n_h >= 1");
    SummationConstants k;
    k.method = method;
    k.element_class = cls;
    switch (method) {
    case SummationMethod::linear:
        k.alpha = linear_constant(n, cls);
        k.beta = linear_constant(n, cls);
        k.gamma = linear_constant(n_h, cls);
        break;
    case SummationMethod::huffman:
        if (!trees)
            throw ValidationError("huffman summation constants need the evaluation trees");
        k.alpha = huffman_constant(trees->at, cls);
        k.beta = huffman_constant(trees->bt, cls);
        k.gamma = huffman_constant(trees->g, cls);
        break;
    case SummationMethod::custom: break;
    }
    return k;
}

/// Constants for a concrete triple and configuration, classifying each
/// matrix separately at the precision its transform runs in.
inline SummationConstants constants_for(const TransformSet& ts, const ConvPlan& plan, DotOrder order, Precision precision) {
    const bool f32 = precision == Precision::fp32;
    const auto cls_at = f32 ? classify<float>(ts.AT) : classify<double>(ts.AT);
    const auto cls_g = f32 ? classify<float>(ts.G) : classify<double>(ts.G);
    const auto cls_bt = f32 ? classify<float>(ts.BT) : classify<double>(ts.BT);
    SummationConstants k;
    k.element_class = worse(worse(cls_at, cls_g), cls_bt);
    if (order == DotOrder::linear) {
        k.method = SummationMethod::linear;
        k.alpha = linear_constant(ts.input_size, cls_at);
        k.beta = linear_constant(ts.input_size, cls_bt);
        k.gamma = linear_constant(ts.kernel_size, cls_g);
    } else {
        k.method = SummationMethod::huffman;
        k.alpha = huffman_constant(plan.trees(ConvPlan::kAT, order), cls_at);
        k.beta = huffman_constant(plan.trees(ConvPlan::kBT, order), cls_bt);
        k.gamma = huffman_constant(plan.trees(ConvPlan::kG, order), cls_g);
    }
    return k;
}

/// lambda(C): C for linear summation over channels, floor(log2 C) + 2 for
/// pairwise.
inline double channel_term(int channels, ChannelSum how) {
    if (channels < 1)
        throw ValidationError("channel count must be >= 1");
    if (how == ChannelSum::linear)
        return channels;
    return std::bit_width(static_cast<unsigned>(channels)) - 1 + 2;
}

struct BoundReport {
    int dims = 1;
    int channels = 1;
    double epsilon = 0;
    double normwise_bound = 0;
    std::vector<double> componentwise_bounds; // n_o or n_o * n_o entries
    double at_one_norm = 0;                   // ||A^T||_1
    double a_one_norm = 0;                    // ||A||_1
    double g_frobenius = 0;                   // ||G||_F
    double bt_frobenius = 0;                  // ||B^T||_F
    double h_norm = 0;                        // max over channels, 2-norm or Frobenius
    double x_norm = 0;
    double lambda = 0;                        // channel summation term, 0 for a single-channel bound
    double factor = 0;                        // R
    SummationConstants constants;
};

namespace detail {

struct TripleNorms {
    Matrix<double> at, g, bt;
    double at1, a1, gF, btF;
};

inline TripleNorms triple_norms(const TransformSet& ts) {
    TripleNorms t{to_double(ts.AT), to_double(ts.G), to_double(ts.BT), 0, 0, 0, 0};
    t.at1 = one_norm(t.at);
    t.a1 = one_norm(t.at.transposed());
    t.gF = frobenius_norm(t.g);
    t.btF = frobenius_norm(t.bt);
    return t;
}

inline void fill_norms(BoundReport& r, const TripleNorms& t) {
    r.at_one_norm = t.at1;
    r.a_one_norm = t.a1;
    r.g_frobenius = t.gF;
    r.bt_frobenius = t.btF;
}

inline std::vector<double> abs_mat_vec(const Matrix<double>& m, std::span<const double> v) {
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out[r] += std::abs(m(r, c)) * std::abs(v[c]);
    return out;
}

// |M| |X| |N|^T for row-major X.
inline Matrix<double> abs_sandwich(const Matrix<double>& m, const Matrix<double>& x, const Matrix<double>& n) {
    return abs(m) * abs(x) * abs(n).transposed();
}

inline Matrix<double> channel_matrix(const Tensor& t, int c) {
    const auto n = static_cast<std::size_t>(t.size);
    Matrix<double> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = t(c, static_cast<int>(i), static_cast<int>(j));
    return m;
}

inline void check_bound_shapes(const TransformSet& ts, const Tensor& h, const Tensor& x, int dims) {
    if (h.dims != dims || x.dims != dims)
        throw ValidationError("bound: tensors have the wrong number of dims");
    if (h.channels != x.channels)
        throw ValidationError("bound: kernel and input channel counts differ");
    if (h.size != ts.kernel_size || x.size != ts.input_size)
        throw ValidationError("bound: tensor sizes do not match the transform set");
}

} // namespace detail

/// One-dimensional bounds: normwise
///     ||A^T||_1 ||G||_F ||h||_2 ||B^T||_F ||x||_2 (alpha + beta + gamma + 1) eps
/// and componentwise |A^T| (|G||h| (.) |B^T||x|) times the same factor.
/// Multi-channel tensors add lambda(C) to the factor and scale the normwise
/// bound by C with the largest per-channel norms.
inline BoundReport bound_1d(const TransformSet& ts, const Tensor& h, const Tensor& x, const SummationConstants& k,
                            double epsilon, ChannelSum channel_sum = ChannelSum::linear) {
    detail::check_bound_shapes(ts, h, x, 1);
    const auto t = detail::triple_norms(ts);
    BoundReport r;
    r.dims = 1;
    r.channels = h.channels;
    r.epsilon = epsilon;
    r.constants = k;
    detail::fill_norms(r, t);
    r.lambda = h.channels > 1 ? channel_term(h.channels, channel_sum) : 0.0;
    r.factor = k.alpha + k.beta + k.gamma + 1 + r.lambda;

    std::vector<double> hadamard(static_cast<std::size_t>(ts.input_size), 0.0);
    for (int c = 0; c < h.channels; ++c) {
        r.h_norm = std::max(r.h_norm, vector_two_norm(h.channel(c)));
        r.x_norm = std::max(r.x_norm, vector_two_norm(x.channel(c)));
        const auto gh = detail::abs_mat_vec(t.g, h.channel(c));
        const auto bx = detail::abs_mat_vec(t.bt, x.channel(c));
        for (std::size_t i = 0; i < hadamard.size(); ++i)
            hadamard[i] += gh[i] * bx[i];
    }
    r.componentwise_bounds = detail::abs_mat_vec(t.at, hadamard);
    for (auto& v : r.componentwise_bounds)
        v *= r.factor * epsilon;
    r.normwise_bound = t.at1 * h.channels * t.gF * r.h_norm * t.btF * r.x_norm * r.factor * epsilon;
    return r;
}

/// Two-dimensional bounds with factor 2 alpha + 2 beta + 2 gamma + 1:
///     ||A^T||_1 ||A||_1 ||G||_F^2 ||H||_F ||B^T||_F^2 ||X||_F R eps
/// and componentwise |A^T| (|G||H||G^T| (.) |B^T||X||B|) |A| R eps.
inline BoundReport bound_2d(const TransformSet& ts, const Tensor& H, const Tensor& X, const SummationConstants& k,
                            double epsilon, ChannelSum channel_sum = ChannelSum::linear) {
    detail::check_bound_shapes(ts, H, X, 2);
    const auto t = detail::triple_norms(ts);
    BoundReport r;
    r.dims = 2;
    r.channels = H.channels;
    r.epsilon = epsilon;
    r.constants = k;
    detail::fill_norms(r, t);
    r.lambda = H.channels > 1 ? channel_term(H.channels, channel_sum) : 0.0;
    r.factor = 2 * k.alpha + 2 * k.beta + 2 * k.gamma + 1 + r.lambda;

    const auto n = static_cast<std::size_t>(ts.input_size);
    Matrix<double> hadamard(n, n);
    for (int c = 0; c < H.channels; ++c) {
        r.h_norm = std::max(r.h_norm, vector_two_norm(H.channel(c)));
        r.x_norm = std::max(r.x_norm, vector_two_norm(X.channel(c)));
        const auto gh = detail::abs_sandwich(t.g, detail::channel_matrix(H, c), t.g);
        const auto bx = detail::abs_sandwich(t.bt, detail::channel_matrix(X, c), t.bt);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                hadamard(i, j) += gh(i, j) * bx(i, j);
    }
    const auto out = abs(t.at) * hadamard * abs(t.at).transposed();
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (double v : out.row(i))
            r.componentwise_bounds.push_back(v * r.factor * epsilon);
    r.normwise_bound = t.at1 * t.a1 * t.gF * t.gF * r.h_norm * t.btF * t.btF * r.x_norm * H.channels * r.factor * epsilon;
    return r;
}

/// Normwise multi-channel bound for unit-norm kernels and inputs:
/// C ||A^T||_1 ||G||_F ||B^T||_F R eps (1D), with R including lambda(C);
/// the 2D form adds ||A||_1 and squares the Frobenius norms.
inline BoundReport bound_multichannel(const TransformSet& ts, int channels, int dims, ChannelSum channel_sum,
                                      const SummationConstants& k, double epsilon) {
    if (dims != 1 && dims != 2)
        throw ValidationError("dims must be 1 or 2");
    const auto t = detail::triple_norms(ts);
    BoundReport r;
    r.dims = dims;
    r.channels = channels;
    r.epsilon = epsilon;
    r.constants = k;
    detail::fill_norms(r, t);
    r.h_norm = 1;
    r.x_norm = 1;
    r.lambda = channel_term(channels, channel_sum);
    const double base = dims == 1 ? k.alpha + k.beta + k.gamma + 1 : 2 * k.alpha + 2 * k.beta + 2 * k.gamma + 1;
    r.factor = base + r.lambda;
    const double norms = dims == 1 ? t.at1 * t.gF * t.btF : t.at1 * t.a1 * t.gF * t.gF * t.btF * t.btF;
    r.normwise_bound = channels * norms * r.factor * epsilon;
    return r;
}

/// Componentwise bound of a modified (infinity) triple. Outputs before the
/// last use the (n-1)-point submatrices and constants alpha', beta' of the
/// one-smaller problem; the last output adds |h_last| |B^T_last row| |x| with
/// factor max{gamma + beta' + alpha' + 1, beta + 1} + 1, which for n_h >= 3
/// is gamma + beta' + alpha' + 1.
inline std::vector<double> modified_componentwise_bound(const TransformSet& ts, std::span<const double> h,
                                                        std::span<const double> x, const SummationConstants& full,
                                                        const SummationConstants& reduced, double epsilon) {
    if (!ts.modified)
        throw ValidationError("modified_componentwise_bound needs a modified triple");
    const auto nh = static_cast<std::size_t>(ts.kernel_size);
    const auto no = static_cast<std::size_t>(ts.output_size);
    const auto n = static_cast<std::size_t>(ts.input_size);
    if (h.size() != nh || x.size() != n)
        throw ValidationError("modified_componentwise_bound: input sizes do not match the transform set");
    const std::size_t m = n - 1;
    const auto at = to_double(ts.AT);
    const auto g = to_double(ts.G);
    const auto bt = to_double(ts.BT);

    std::vector<double> had(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double gh = 0, bx = 0;
        for (std::size_t j = 0; j < nh; ++j)
            gh += std::abs(g(i, j)) * std::abs(h[j]);
        for (std::size_t j = 0; j < m; ++j)
            bx += std::abs(bt(i, j)) * std::abs(x[j]);
        had[i] = gh * bx;
    }
    const double inner = full.gamma + reduced.beta + reduced.alpha + 1;
    std::vector<double> out(no);
    for (std::size_t q = 0; q < no; ++q) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i)
            s += std::abs(at(q, i)) * had[i];
        if (q + 1 < no) {
            out[q] = s * inner * epsilon;
            continue;
        }
        double last = 0;
        for (std::size_t j = 0; j < n; ++j)
            last += std::abs(bt(m, j)) * std::abs(x[j]);
        last *= std::abs(h[nh - 1]);
        const double factor = nh >= 3 ? inner : std::max(inner, full.beta + 1) + 1;
        out[q] = (s + last) * factor * epsilon;
    }
    return out;
}

/// Rows are the Kronecker products of matching rows: row i is
/// kron(B^T_i, G_i), entry j * n_h + k = B^T_ij G_ik.
template <typename T>
Matrix<T> khatri_rao_rowwise(const Matrix<T>& bt, const Matrix<T>& g) {
    if (bt.rows() != g.rows())
        throw ValidationError("khatri_rao_rowwise: row counts differ");
    Matrix<T> out(bt.rows(), bt.cols() * g.cols());
    for (std::size_t i = 0; i < bt.rows(); ++i)
        for (std::size_t j = 0; j < bt.cols(); ++j)
            for (std::size_t k = 0; k < g.cols(); ++k)
                out(i, j * g.cols() + k) = bt(i, j) * g(i, k);
    return out;
}

struct ConditionReport {
    double kappa = 0; // kappa_2 of A^T (B^T kr G), +inf when singular
    double bound = 0; // sqrt(n_o n n_h) max{||x||_1, ||h||_1} kappa
    bool singular = false;
};

/// kappa_2 of the square-system product A^T (B^T kr G), the n x (n n_h)
/// matrix that maps x kron h to the interpolated result.
inline double conditioning_kappa(const TransformSet& ts, double tolerance = 1e-12) {
    const auto kr = khatri_rao_rowwise(to_double(ts.BT), to_double(ts.G));
    return condition_number_2(to_double(ts.AT_square) * kr, tolerance);
}

inline ConditionReport condition_bound(const TransformSet& ts, std::span<const double> h, std::span<const double> x) {
    if (h.size() != static_cast<std::size_t>(ts.kernel_size) || x.size() != static_cast<std::size_t>(ts.input_size))
        throw ValidationError("condition_bound: input sizes do not match the transform set");
    ConditionReport r;
    r.kappa = conditioning_kappa(ts);
    r.singular = std::isinf(r.kappa);
    const double scale = std::sqrt(static_cast<double>(ts.output_size) * ts.input_size * ts.kernel_size);
    r.bound = scale * std::max(vector_one_norm(x), vector_one_norm(h)) * r.kappa;
    return r;
}

} // namespace toomcook
