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
#include <array>
#include <concepts>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/eval_tree.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

/// fp32: everything in single precision. fp64: everything in double.
/// mixed: transforms in fp64, Hadamard product and channel sum in fp32.
enum class Precision { fp32, fp64, mixed };
enum class ChannelSum { linear, pairwise };

struct ConvConfig {
    Precision precision = Precision::fp32;
    DotOrder dot_order = DotOrder::huffman;
    ChannelSum channel_sum = ChannelSum::linear;

    friend bool operator==(const ConvConfig&, const ConvConfig&) = default;
};

inline std::string_view to_string(Precision p) {
    switch (p) {
    case Precision::fp32: return "fp32";
    case Precision::fp64: return "fp64";
    case Precision::mixed: return "mixed";
    }
    return "?";
}
inline std::string_view to_string(DotOrder o) { return o == DotOrder::huffman ? "huffman" : "linear"; }
inline std::string_view to_string(ChannelSum s) { return s == ChannelSum::pairwise ? "pairwise" : "linear"; }

inline Precision parse_precision(std::string_view s) {
    if (s == "fp32") return Precision::fp32;
    if (s == "fp64") return Precision::fp64;
    if (s == "mixed") return Precision::mixed;
    throw ValidationError("unknown precision '" + std::string(s) + "' (fp32|fp64|mixed)");
}
inline DotOrder parse_dot_order(std::string_view s) {
    if (s == "linear") return DotOrder::linear;
    if (s == "huffman") return DotOrder::huffman;
    throw ValidationError("unknown dot order '" + std::string(s) + "' (linear|huffman)");
}
inline ChannelSum parse_channel_sum(std::string_view s) {
    if (s == "linear") return ChannelSum::linear;
    if (s == "pairwise") return ChannelSum::pairwise;
    throw ValidationError("unknown channel sum '" + std::string(s) + "' (linear|pairwise)");
}

/// Unit roundoff of the precision that bounds the result: 2^-24 or 2^-53.
inline double unit_roundoff(Precision p) { return p == Precision::fp64 ? 0x1p-53 : 0x1p-24; }

/// Channel-major values of shape C x n (dims 1) or C x n x n (dims 2).
/// Values are stored as double; the engine rounds them to the working
/// precision on entry.
struct Tensor {
    int dims = 1;
    int channels = 1;
    int size = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int dims_, int channels_, int size_) : dims(dims_), channels(channels_), size(size_) {
        if (dims_ != 1 && dims_ != 2)
            throw ValidationError("tensor dims must be 1 or 2");
        if (channels_ < 1 || size_ < 1)
            throw ValidationError("tensor channels and size must be >= 1");
        data.assign(static_cast<std::size_t>(channels_) * stride(), 0.0);
    }

    [[nodiscard]] std::size_t stride() const {
        const auto n = static_cast<std::size_t>(size);
        return dims == 1 ? n : n * n;
    }
    [[nodiscard]] std::span<double> channel(int c) { return {data.data() + static_cast<std::size_t>(c) * stride(), stride()}; }
    [[nodiscard]] std::span<const double> channel(int c) const {
        return {data.data() + static_cast<std::size_t>(c) * stride(), stride()};
    }
    double& operator()(int c, int i) { return data[static_cast<std::size_t>(c) * stride() + static_cast<std::size_t>(i)]; }
    double operator()(int c, int i) const { return data[static_cast<std::size_t>(c) * stride() + static_cast<std::size_t>(i)]; }
    double& operator()(int c, int i, int j) { return (*this)(c, i * size + j); }
    double operator()(int c, int i, int j) const { return (*this)(c, i * size + j); }
};

/// Balanced recursive summation: sum(v) = sum(first half) + sum(second half).
template <std::floating_point T>
T pairwise_sum(std::span<const T> v) {
    if (v.empty())
        throw ValidationError("pairwise_sum of an empty list");
    if (v.size() == 1)
        return v[0];
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <std::floating_point T>
T linear_sum(std::span<const T> v) {
    if (v.empty())
        throw ValidationError("linear_sum of an empty list");
    T acc = v[0];
    for (std::size_t i = 1; i < v.size(); ++i)
        acc = acc + v[i];
    return acc;
}

namespace detail {

template <std::floating_point T>
T channel_reduce(std::span<const T> v, ChannelSum how) {
    return how == ChannelSum::pairwise ? pairwise_sum(v) : linear_sum(v);
}

// Sums per-channel values laid out as C blocks of `stride` entries.
template <std::floating_point T>
std::vector<T> sum_channels(const std::vector<T>& per_channel, int channels, std::size_t stride, ChannelSum how) {
    std::vector<T> out(stride);
    std::vector<T> column(static_cast<std::size_t>(channels));
    for (std::size_t e = 0; e < stride; ++e) {
        for (int c = 0; c < channels; ++c)
            column[static_cast<std::size_t>(c)] = per_channel[static_cast<std::size_t>(c) * stride + e];
        out[e] = channel_reduce<T>(column, how);
    }
    return out;
}

inline void check_pair(const Tensor& h, const Tensor& x) {
    if (h.dims != x.dims)
        throw ValidationError("kernel and input have different dims");
    if (h.channels != x.channels)
        throw ValidationError("kernel and input have different channel counts");
    if (x.size < h.size)
        throw ValidationError("input shorter than kernel");
    if (h.data.size() != h.stride() * static_cast<std::size_t>(h.channels) ||
        x.data.size() != x.stride() * static_cast<std::size_t>(x.channels))
        throw ValidationError("tensor data size does not match its shape");
}

template <std::floating_point T>
Tensor direct(const Tensor& h, const Tensor& x, ChannelSum how) {
    const int nh = h.size;
    const int no = x.size - h.size + 1;
    const int C = h.channels;
    Tensor out(h.dims, 1, no);
    const std::size_t stride = out.stride();
    std::vector<T> per(static_cast<std::size_t>(C) * stride);
    for (int c = 0; c < C; ++c) {
        T* dst = per.data() + static_cast<std::size_t>(c) * stride;
        if (h.dims == 1) {
            for (int k = 0; k < no; ++k) {
                T acc = static_cast<T>(h(c, 0)) * static_cast<T>(x(c, k));
                for (int j = 1; j < nh; ++j)
                    acc = acc + static_cast<T>(h(c, j)) * static_cast<T>(x(c, k + j));
                dst[k] = acc;
            }
        } else {
            for (int k = 0; k < no; ++k)
                for (int l = 0; l < no; ++l) {
                    T acc = static_cast<T>(h(c, 0, 0)) * static_cast<T>(x(c, k, l));
                    for (int i = 0; i < nh; ++i)
                        for (int j = 0; j < nh; ++j) {
                            if (i == 0 && j == 0)
                                continue;
                            acc = acc + static_cast<T>(h(c, i, j)) * static_cast<T>(x(c, k + i, l + j));
                        }
                    dst[static_cast<std::size_t>(k * no + l)] = acc;
                }
        }
    }
    const auto summed = sum_channels(per, C, stride, how);
    std::copy(summed.begin(), summed.end(), out.data.begin());
    return out;
}

} // namespace detail

/// Valid-region correlation computed directly, in fp32 (fp32 and mixed) or
/// fp64, with channel results summed pointwise.
inline Tensor conv_direct(const Tensor& h, const Tensor& x, Precision precision,
                          ChannelSum channel_sum = ChannelSum::linear) {
    detail::check_pair(h, x);
    if (precision == Precision::fp64)
        return detail::direct<double>(h, x, channel_sum);
    return detail::direct<float>(h, x, channel_sum);
}

/// Evaluation trees and compiled row programs of one TransformSet, for both
/// dot orders. Built once; the input values never change the trees.
class ConvPlan {
  public:
    enum Which { kAT = 0, kG = 1, kBT = 2 };

    explicit ConvPlan(const TransformSet& ts)
        : kernel_size_(ts.kernel_size), output_size_(ts.output_size), input_size_(ts.input_size),
          modified_(ts.modified) {
        // Leaves of A^T rows are ranked by their point in canonical order, so
        // any permutation of the same point set yields the same summation order.
        std::vector<std::size_t> order(ts.points.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return ts.points[a] < ts.points[b]; });
        point_rank_.resize(order.size());
        for (std::size_t r = 0; r < order.size(); ++r)
            point_rank_[order[r]] = static_cast<int>(r);

        const Matrix<Rational>* mats[3] = {&ts.AT, &ts.G, &ts.BT};
        for (int o = 0; o < 2; ++o) {
            const auto dot_order = o == 0 ? DotOrder::linear : DotOrder::huffman;
            for (int w = 0; w < 3; ++w) {
                auto& slot = slots_[static_cast<std::size_t>(o)][static_cast<std::size_t>(w)];
                const auto& m = *mats[w];
                for (std::size_t r = 0; r < m.rows(); ++r) {
                    const std::span<const int> rank =
                        w == kAT ? std::span<const int>(point_rank_) : std::span<const int>();
                    slot.trees.push_back(make_tree(m.row(r), dot_order, rank));
                    slot.f32.emplace_back(slot.trees.back());
                    slot.f64.emplace_back(slot.trees.back());
                }
            }
        }
    }

    [[nodiscard]] int kernel_size() const { return kernel_size_; }
    [[nodiscard]] int output_size() const { return output_size_; }
    [[nodiscard]] int input_size() const { return input_size_; }
    [[nodiscard]] bool modified() const { return modified_; }
    [[nodiscard]] const std::vector<int>& point_rank() const { return point_rank_; }

    [[nodiscard]] const std::vector<EvalTree>& trees(Which w, DotOrder o) const { return slot(w, o).trees; }

    template <std::floating_point T>
    [[nodiscard]] const std::vector<DotProgram<T>>& programs(Which w, DotOrder o) const {
        if constexpr (std::is_same_v<T, float>)
            return slot(w, o).f32;
        else
            return slot(w, o).f64;
    }

  private:
    struct Slot {
        std::vector<EvalTree> trees;
        std::vector<DotProgram<float>> f32;
        std::vector<DotProgram<double>> f64;
    };
    [[nodiscard]] const Slot& slot(Which w, DotOrder o) const {
        return slots_[o == DotOrder::huffman ? 1 : 0][static_cast<std::size_t>(w)];
    }

    int kernel_size_;
    int output_size_;
    int input_size_;
    bool modified_;
    std::vector<int> point_rank_;
    std::array<std::array<Slot, 3>, 2> slots_;
};

namespace detail {

// rows x cols block stored row-major.
template <typename T>
struct Block {
    std::size_t rows = 0, cols = 0;
    std::vector<T> v;
    Block(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c) {}
    T& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    T operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

// M X: each program row applied to every column of X.
template <typename T>
Block<T> left_apply(const std::vector<DotProgram<T>>& M, const Block<T>& X) {
    Block<T> Y(M.size(), X.cols);
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t c = 0; c < X.cols; ++c)
            Y(i, c) = M[i].evaluate([&](int j) { return X(static_cast<std::size_t>(j), c); });
    return Y;
}

// X M^T: each program row applied to every row of X.
template <typename T>
Block<T> right_apply(const Block<T>& X, const std::vector<DotProgram<T>>& M) {
    Block<T> Y(X.rows, M.size());
    for (std::size_t r = 0; r < X.rows; ++r)
        for (std::size_t i = 0; i < M.size(); ++i)
            Y(r, i) = M[i].evaluate([&](int j) { return X(r, static_cast<std::size_t>(j)); });
    return Y;
}

// TT: transform precision. HT: Hadamard, channel-sum and I/O precision.
template <std::floating_point TT, std::floating_point HT>
Tensor run_toom_cook(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    const auto& G = plan.programs<TT>(ConvPlan::kG, cfg.dot_order);
    const auto& BT = plan.programs<TT>(ConvPlan::kBT, cfg.dot_order);
    const auto& AT = plan.programs<TT>(ConvPlan::kAT, cfg.dot_order);
    const auto n = static_cast<std::size_t>(plan.input_size());
    const auto nh = static_cast<std::size_t>(plan.kernel_size());
    const auto no = static_cast<std::size_t>(plan.output_size());
    const int C = h.channels;
    const bool two_d = h.dims == 2;
    const std::size_t stride = two_d ? n * n : n;

    auto in = [](double v) { return static_cast<TT>(static_cast<HT>(v)); };

    std::vector<HT> products(static_cast<std::size_t>(C) * stride);
    for (int c = 0; c < C; ++c) {
        HT* dst = products.data() + static_cast<std::size_t>(c) * stride;
        if (!two_d) {
            Block<TT> hk(nh, 1), xk(n, 1);
            for (std::size_t j = 0; j < nh; ++j)
                hk(j, 0) = in(h(c, static_cast<int>(j)));
            for (std::size_t j = 0; j < n; ++j)
                xk(j, 0) = in(x(c, static_cast<int>(j)));
            const auto u = left_apply(G, hk);
            const auto v = left_apply(BT, xk);
            for (std::size_t i = 0; i < n; ++i)
                dst[i] = static_cast<HT>(u(i, 0)) * static_cast<HT>(v(i, 0));
        } else {
            Block<TT> Hk(nh, nh), Xk(n, n);
            for (std::size_t i = 0; i < nh; ++i)
                for (std::size_t j = 0; j < nh; ++j)
                    Hk(i, j) = in(h(c, static_cast<int>(i), static_cast<int>(j)));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    Xk(i, j) = in(x(c, static_cast<int>(i), static_cast<int>(j)));
            const auto U = right_apply(left_apply(G, Hk), G);
            const auto V = right_apply(left_apply(BT, Xk), BT);
            for (std::size_t e = 0; e < stride; ++e)
                dst[e] = static_cast<HT>(U.v[e]) * static_cast<HT>(V.v[e]);
        }
    }
    const auto summed = sum_channels(products, C, stride, cfg.channel_sum);

    Tensor out(h.dims, 1, static_cast<int>(no));
    if (!two_d) {
        Block<TT> m(n, 1);
        for (std::size_t i = 0; i < n; ++i)
            m(i, 0) = static_cast<TT>(summed[i]);
        const auto y = left_apply(AT, m);
        for (std::size_t k = 0; k < no; ++k)
            out.data[k] = static_cast<double>(static_cast<HT>(y(k, 0)));
    } else {
        Block<TT> M(n, n);
        for (std::size_t e = 0; e < stride; ++e)
            M.v[e] = static_cast<TT>(summed[e]);
        const auto Y = right_apply(left_apply(AT, M), AT);
        for (std::size_t e = 0; e < no * no; ++e)
            out.data[e] = static_cast<double>(static_cast<HT>(Y.v[e]));
    }
    return out;
}

inline void check_plan_shapes(const ConvPlan& plan, const Tensor& h, const Tensor& x, int dims) {
    check_pair(h, x);
    if (h.dims != dims)
        throw ValidationError(dims == 1 ? "conv_1d needs 1D tensors" : "conv_2d needs 2D tensors");
    if (h.size != plan.kernel_size())
        throw ValidationError("kernel size " + std::to_string(h.size) + " does not match the transform set (" +
                              std::to_string(plan.kernel_size()) + ")");
    if (x.size != plan.input_size())
        throw ValidationError("input size " + std::to_string(x.size) + " does not match the transform set (" +
                              std::to_string(plan.input_size()) + ")");
}

inline Tensor dispatch(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    switch (cfg.precision) {
    case Precision::fp32: return run_toom_cook<float, float>(plan, h, x, cfg);
    case Precision::fp64: return run_toom_cook<double, double>(plan, h, x, cfg);
    case Precision::mixed: return run_toom_cook<double, float>(plan, h, x, cfg);
    }
    throw ValidationError("unknown precision");
}

} // namespace detail

/// A^T (sum_c G h_c (.) B^T x_c): Hadamard products are summed across
/// channels before the single output transform.
inline Tensor conv_1d(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    detail::check_plan_shapes(plan, h, x, 1);
    return detail::dispatch(plan, h, x, cfg);
}

inline Tensor conv_1d(const TransformSet& ts, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    return conv_1d(ConvPlan(ts), h, x, cfg);
}

/// A^T (sum_c G H_c G^T (.) B^T X_c B) A, each two-sided product computed
/// as a column pass followed by a row pass.
inline Tensor conv_2d(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    detail::check_plan_shapes(plan, h, x, 2);
    return detail::dispatch(plan, h, x, cfg);
}

inline Tensor conv_2d(const TransformSet& ts, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    return conv_2d(ConvPlan(ts), h, x, cfg);
}

} // namespace toomcook
