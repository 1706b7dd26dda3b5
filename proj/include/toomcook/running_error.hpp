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
#include <vector>

#include "toomcook/conv.hpp"
#include "toomcook/eval_tree.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

/// A computed value with a running bound on its absolute error.
struct Tracked {
    double value = 0;
    double error = 0;
};

/// Postfix dot-product program that also accumulates a running error bound
/// from the actual intermediate magnitudes.
template <std::floating_point T>
class TrackedProgram {
  public:
    struct Op {
        int column; // -1: add
        T coefficient;
        double coefficient_error; // |rounded - exact|
        bool exact_product;       // power of two: the product is not rounded
    };

    TrackedProgram() = default;
    explicit TrackedProgram(const EvalTree& tree) {
        if (!tree.empty())
            emit(tree, tree.root);
    }

    template <typename Get>
    [[nodiscard]] Tracked evaluate(Get&& get) const {
        constexpr double u = std::numeric_limits<T>::epsilon() / 2;
        std::vector<Tracked> stack;
        stack.reserve(ops_.size());
        for (const auto& op : ops_) {
            if (op.column >= 0) {
                const Tracked in = get(op.column);
                const T v = static_cast<T>(in.value);
                const T p = op.coefficient * v;
                double e = std::abs(static_cast<double>(op.coefficient)) * in.error +
                           std::abs(static_cast<double>(v)) * op.coefficient_error;
                if (!op.exact_product)
                    e += u * std::abs(static_cast<double>(p));
                stack.push_back({static_cast<double>(p), e});
            } else {
                const Tracked b = stack.back();
                stack.pop_back();
                Tracked& a = stack.back();
                const T s = static_cast<T>(a.value) + static_cast<T>(b.value);
                a = {static_cast<double>(s), a.error + b.error + u * std::abs(static_cast<double>(s))};
            }
        }
        return stack.empty() ? Tracked{} : stack.front();
    }

  private:
    void emit(const EvalTree& tree, int id) {
        const auto& n = tree.nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) {
            const T c = to_nearest<T>(n.coefficient);
            const Rational diff = (Rational::from_float(c) - n.coefficient).abs();
            ops_.push_back({n.column, c, to_nearest<double>(diff), n.coefficient.is_power_of_two()});
            return;
        }
        emit(tree, n.left);
        emit(tree, n.right);
        ops_.push_back({-1, T(0), 0.0, false});
    }

    std::vector<Op> ops_;
};

struct RunningResult {
    Tensor output;
    std::vector<double> bounds; // one per output element
};

namespace detail {

template <std::floating_point T>
std::vector<TrackedProgram<T>> tracked_rows(const std::vector<EvalTree>& trees) {
    return {trees.begin(), trees.end()};
}

// Rounds a tracked value to HT, adding the rounding error when HT is narrower.
template <std::floating_point HT>
Tracked narrow(Tracked t) {
    const HT v = static_cast<HT>(t.value);
    if (static_cast<double>(v) != t.value)
        t.error += std::numeric_limits<HT>::epsilon() / 2 * std::abs(static_cast<double>(v));
    t.value = static_cast<double>(v);
    return t;
}

template <std::floating_point HT>
Tracked tracked_sum(std::span<const Tracked> v, ChannelSum how) {
    constexpr double u = std::numeric_limits<HT>::epsilon() / 2;
    auto add = [&](Tracked a, Tracked b) {
        const HT s = static_cast<HT>(a.value) + static_cast<HT>(b.value);
        return Tracked{static_cast<double>(s), a.error + b.error + u * std::abs(static_cast<double>(s))};
    };
    if (v.empty())
        return {};
    if (how == ChannelSum::linear || v.size() == 1) {
        Tracked acc = v[0];
        for (std::size_t i = 1; i < v.size(); ++i)
            acc = add(acc, v[i]);
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return add(tracked_sum<HT>(v.first(half), how), tracked_sum<HT>(v.subspan(half), how));
}

template <std::floating_point TT, std::floating_point HT>
RunningResult run_tracked(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    constexpr double uh = std::numeric_limits<HT>::epsilon() / 2;
    const auto G = tracked_rows<TT>(plan.trees(ConvPlan::kG, cfg.dot_order));
    const auto BT = tracked_rows<TT>(plan.trees(ConvPlan::kBT, cfg.dot_order));
    const auto AT = tracked_rows<TT>(plan.trees(ConvPlan::kAT, cfg.dot_order));
    const auto n = static_cast<std::size_t>(plan.input_size());
    const auto no = static_cast<std::size_t>(plan.output_size());
    const int C = h.channels;

    auto input = [](double v) { return narrow<HT>(Tracked{v, 0.0}); };

    std::vector<std::vector<Tracked>> products(n, std::vector<Tracked>(static_cast<std::size_t>(C)));
    for (int c = 0; c < C; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            const Tracked u = narrow<HT>(G[i].evaluate([&](int j) { return input(h(c, j)); }));
            const Tracked v = narrow<HT>(BT[i].evaluate([&](int j) { return input(x(c, j)); }));
            const HT p = static_cast<HT>(u.value) * static_cast<HT>(v.value);
            const double e = std::abs(u.value) * v.error + std::abs(v.value) * u.error + u.error * v.error +
                             uh * std::abs(static_cast<double>(p));
            products[i][static_cast<std::size_t>(c)] = {static_cast<double>(p), e};
        }
    }
    std::vector<Tracked> summed(n);
    for (std::size_t i = 0; i < n; ++i)
        summed[i] = tracked_sum<HT>(products[i], cfg.channel_sum);

    RunningResult r{Tensor(1, 1, static_cast<int>(no)), std::vector<double>(no)};
    for (std::size_t k = 0; k < no; ++k) {
        const Tracked y = narrow<HT>(AT[k].evaluate([&](int j) { return summed[static_cast<std::size_t>(j)]; }));
        r.output.data[k] = y.value;
        r.bounds[k] = y.error;
    }
    return r;
}

} // namespace detail

/// 1D Toom-Cook with a running error bound: the same operations as conv_1d
/// in the same order, each one adding u|result| (plus the propagated error
/// of its operands) to the bound. Outputs equal conv_1d bit for bit.
inline RunningResult running_error_1d(const ConvPlan& plan, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    detail::check_plan_shapes(plan, h, x, 1);
    switch (cfg.precision) {
    case Precision::fp32: return detail::run_tracked<float, float>(plan, h, x, cfg);
    case Precision::fp64: return detail::run_tracked<double, double>(plan, h, x, cfg);
    case Precision::mixed: return detail::run_tracked<double, float>(plan, h, x, cfg);
    }
    throw ValidationError("unknown precision");
}

inline RunningResult running_error_1d(const TransformSet& ts, const Tensor& h, const Tensor& x, const ConvConfig& cfg) {
    return running_error_1d(ConvPlan(ts), h, x, cfg);
}

} // namespace toomcook
