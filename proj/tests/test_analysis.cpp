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
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "toomcook/bounds.hpp"
#include "toomcook/curated.hpp"
#include "toomcook/exact.hpp"
#include "toomcook/running_error.hpp"

using namespace toomcook;
using testing_support::random_matrix;
using testing_support::random_vector;

namespace {

TransformSet p4() { return build_transform_set(3, 2, parse_points("0,-1,1,inf")); }
TransformSet p8() { return build_transform_set(3, 6, parse_points("0,-1,1,1/2,-1/2,2,-2,inf")); }

float uniform_fp32(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> k(0, (1 << 24) - 1);
    return static_cast<float>((2 * k(rng) + 1 - (1 << 24)) * 0x1p-24);
}

Tensor random_tensor(std::mt19937_64& rng, int dims, int channels, int size) {
    Tensor t(dims, channels, size);
    for (auto& v : t.data)
        v = uniform_fp32(rng);
    return t;
}

Matrix<double> random_doubles(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::normal_distribution<double> d;
    Matrix<double> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

} // namespace

TEST(Norms, HandExamples) {
    Matrix<double> id(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        id(i, i) = 1;
    EXPECT_EQ(one_norm(id), 1.0);
    EXPECT_DOUBLE_EQ(frobenius_norm(id), std::sqrt(3.0));

    Matrix<double> m(2, 2);
    m(0, 0) = 1, m(0, 1) = -2, m(1, 0) = 3, m(1, 1) = 4;
    const auto n = matrix_norms(m);
    EXPECT_EQ(n.one_norm, 6.0);
    EXPECT_DOUBLE_EQ(n.frobenius, std::sqrt(30.0));
}

TEST(Norms, FrobeniusIsTransposeInvariant) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_doubles(rng, 1 + t % 5, 1 + t % 7);
        EXPECT_DOUBLE_EQ(frobenius_norm(m), frobenius_norm(m.transposed()));
    }
}

TEST(Svd, SingularValuesOfDiagonal) {
    Matrix<double> m(3, 3);
    m(0, 0) = -2, m(1, 1) = 5, m(2, 2) = 0.5;
    const auto s = singular_values(m);
    ASSERT_TRUE(s.converged);
    ASSERT_EQ(s.singular_values.size(), 3u);
    EXPECT_NEAR(s.singular_values[0], 5, 1e-14);
    EXPECT_NEAR(s.singular_values[1], 2, 1e-14);
    EXPECT_NEAR(s.singular_values[2], 0.5, 1e-14);
    EXPECT_NEAR(condition_number_2(m), 10, 1e-13);
}

TEST(Svd, FrobeniusIsRootSumOfSquares) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const auto m = random_doubles(rng, 6, 6);
        const auto s = singular_values(m);
        double sq = 0;
        for (double v : s.singular_values)
            sq += v * v;
        EXPECT_NEAR(std::sqrt(sq), frobenius_norm(m), 1e-12 * frobenius_norm(m));
        // ||M||_2 <= ||M||_F <= sqrt(rank) ||M||_2
        const double two = s.singular_values.front();
        EXPECT_LE(two, frobenius_norm(m) * (1 + 1e-14));
        EXPECT_LE(frobenius_norm(m), std::sqrt(6.0) * two * (1 + 1e-14));
    }
}

TEST(Svd, WideMatrixMatchesItsTranspose) {
    std::mt19937_64 rng(3);
    const auto m = random_doubles(rng, 4, 12);
    const auto a = singular_values(m).singular_values;
    const auto b = singular_values(m.transposed()).singular_values;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(a[i], b[i], 1e-12 * a[0]);
}

TEST(Svd, SingularMatrixHasInfiniteCondition) {
    Matrix<double> m(2, 2);
    m(0, 0) = 1, m(0, 1) = 2, m(1, 0) = 2, m(1, 1) = 4;
    EXPECT_TRUE(std::isinf(condition_number_2(m)));
}

TEST(KhatriRao, RowExample) {
    Matrix<Rational> bt(1, 2), g(1, 2);
    bt(0, 0) = Rational(1);
    g(0, 0) = Rational(2), g(0, 1) = Rational(3);
    const auto kr = khatri_rao_rowwise(bt, g);
    ASSERT_EQ(kr.rows(), 1u);
    ASSERT_EQ(kr.cols(), 4u);
    EXPECT_EQ(kr(0, 0), Rational(2));
    EXPECT_EQ(kr(0, 1), Rational(3));
    EXPECT_EQ(kr(0, 2), Rational(0));
    EXPECT_EQ(kr(0, 3), Rational(0));
}

TEST(KhatriRao, RowCountMismatchThrows) {
    EXPECT_THROW(khatri_rao_rowwise(Matrix<double>(2, 2), Matrix<double>(3, 2)), ValidationError);
}

TEST(KhatriRao, FactorsTheHadamardProductExactly) {
    std::mt19937_64 rng(4);
    for (const auto& ts : {p4(), p8(), build_transform_set(4, 3, parse_points("0,1,-1,2,-2,1/2"))}) {
        const auto kr = khatri_rao_rowwise(ts.BT, ts.G);
        const auto n = static_cast<std::size_t>(ts.input_size);
        const auto nh = static_cast<std::size_t>(ts.kernel_size);
        ASSERT_EQ(kr.rows(), n);
        ASSERT_EQ(kr.cols(), n * nh);
        for (int t = 0; t < 100; ++t) {
            const auto h = random_vector(rng, nh);
            const auto x = random_vector(rng, n);
            std::vector<Rational> xh;
            for (const auto& xi : x)
                for (const auto& hk : h)
                    xh.push_back(xi * hk);
            const auto lhs = kr * xh;
            const auto gh = ts.G * h;
            const auto bx = ts.BT * x;
            for (std::size_t i = 0; i < n; ++i)
                ASSERT_EQ(lhs[i], gh[i] * bx[i]);
        }
    }
}

TEST(SummationConstants, LinearByElementClass) {
    EXPECT_EQ(summation_constants(SummationMethod::linear, 4, 3, ElementClass::general).alpha, 5);
    EXPECT_EQ(summation_constants(SummationMethod::linear, 4, 3, ElementClass::exact).alpha, 4);
    EXPECT_EQ(summation_constants(SummationMethod::linear, 4, 3, ElementClass::power_of_two).alpha, 3);
    const auto k = summation_constants(SummationMethod::linear, 6, 3, ElementClass::general);
    EXPECT_EQ(k.beta, 7);
    EXPECT_EQ(k.gamma, 4);
}

TEST(SummationConstants, HuffmanUsesTreeDepth) {
    const std::vector<Rational> row{Rational(3), Rational(3), Rational(3), Rational(3)};
    const std::vector<EvalTree> trees{huffman_order(row)};
    ASSERT_EQ(trees[0].depth(), 2);
    const auto k = summation_constants(SummationMethod::huffman, 4, 4, ElementClass::exact, TreeSet{trees, trees, trees});
    EXPECT_EQ(k.alpha, 3);
    EXPECT_EQ(k.beta, 3);
    EXPECT_EQ(k.gamma, 3);
}

TEST(SummationConstants, Errors) {
    EXPECT_THROW(summation_constants(SummationMethod::huffman, 4, 3, ElementClass::general), ValidationError);
    EXPECT_THROW(summation_constants(SummationMethod::linear, 0, 3, ElementClass::general), ValidationError);
    EXPECT_THROW(summation_constants(SummationMethod::linear, 4, 0, ElementClass::general), ValidationError);
}

TEST(SummationConstants, Classification) {
    const auto ts = p4();
    EXPECT_EQ(classify<float>(ts.AT), ElementClass::power_of_two);
    EXPECT_EQ(classify<float>(ts.G), ElementClass::power_of_two); // entries +-1, +-1/2
    Matrix<Rational> third(1, 1);
    third(0, 0) = Rational(mpz_class(1), mpz_class(3));
    EXPECT_EQ(classify<float>(third), ElementClass::general);
    EXPECT_EQ(classify<double>(third), ElementClass::general);
    Matrix<Rational> three(1, 2);
    three(0, 0) = Rational(3);
    three(0, 1) = Rational(-4);
    EXPECT_EQ(classify<float>(three), ElementClass::exact);
}

TEST(ChannelTerm, LinearAndPairwise) {
    EXPECT_EQ(channel_term(1, ChannelSum::linear), 1);
    EXPECT_EQ(channel_term(64, ChannelSum::linear), 64);
    EXPECT_EQ(channel_term(64, ChannelSum::pairwise), 8);
    EXPECT_EQ(channel_term(1, ChannelSum::pairwise), 2);
    EXPECT_EQ(channel_term(5, ChannelSum::pairwise), 4);
    EXPECT_THROW(channel_term(0, ChannelSum::linear), ValidationError);
}

TEST(Bounds, ZeroKernelGivesZero) {
    const auto ts = p4();
    const auto k = summation_constants(SummationMethod::linear, 4, 3, ElementClass::general);
    std::mt19937_64 rng(5);
    const auto x = random_tensor(rng, 1, 1, 4);
    const auto r = bound_1d(ts, Tensor(1, 1, 3), x, k, 0x1p-24);
    EXPECT_EQ(r.normwise_bound, 0);
    for (double v : r.componentwise_bounds)
        EXPECT_EQ(v, 0);
    const auto X = random_tensor(rng, 2, 1, 4);
    const auto r2 = bound_2d(ts, Tensor(2, 1, 3), X, k, 0x1p-24);
    EXPECT_EQ(r2.normwise_bound, 0);
    EXPECT_EQ(r2.componentwise_bounds.size(), 4u);
}

TEST(Bounds, DoublingInputDoublesNormwiseBound) {
    const auto ts = p8();
    const auto k = summation_constants(SummationMethod::linear, 8, 3, ElementClass::general);
    std::mt19937_64 rng(6);
    const auto h = random_tensor(rng, 1, 1, 3);
    auto x = random_tensor(rng, 1, 1, 8);
    const double b1 = bound_1d(ts, h, x, k, 0x1p-24).normwise_bound;
    for (auto& v : x.data)
        v *= 2;
    EXPECT_EQ(bound_1d(ts, h, x, k, 0x1p-24).normwise_bound, 2 * b1);
}

TEST(Bounds, OneDimensionalPlugIn) {
    const auto ts = p4();
    const auto k = summation_constants(SummationMethod::linear, 4, 3, ElementClass::general);
    Tensor h(1, 1, 3), x(1, 1, 4);
    h.data = {0.6, 0.0, 0.8};
    x.data = {0.0, 1.0, 0.0, 0.0};
    const auto r = bound_1d(ts, h, x, k, 0x1p-24);
    // ||A^T||_1 = 2, ||G||_F^2 = 1/4 * 4 + 1/4 * 3 + 1 ... computed from the entries
    const auto t = to_double(ts.AT);
    EXPECT_EQ(r.at_one_norm, one_norm(t));
    EXPECT_DOUBLE_EQ(r.normwise_bound,
                     r.at_one_norm * r.g_frobenius * 1.0 * r.bt_frobenius * 1.0 * (5 + 5 + 4 + 1) * 0x1p-24);
    EXPECT_EQ(r.factor, 15);
    EXPECT_EQ(r.lambda, 0);
}

TEST(Bounds, TwoDimensionalPlugInAtUnitNorms) {
    const auto ts = p4();
    const auto k = summation_constants(SummationMethod::linear, 4, 3, ElementClass::general);
    Tensor H(2, 1, 3), X(2, 1, 4);
    H.data[4] = 1;
    X.data[0] = 1;
    const auto r = bound_2d(ts, H, X, k, 0x1p-24);
    const double expect = one_norm(to_double(ts.AT)) * one_norm(to_double(ts.AT).transposed()) *
                          std::pow(frobenius_norm(to_double(ts.G)), 2) * std::pow(frobenius_norm(to_double(ts.BT)), 2) *
                          (2 * 5 + 2 * 5 + 2 * 4 + 1) * 0x1p-24;
    EXPECT_DOUBLE_EQ(r.normwise_bound, expect);
}

TEST(Bounds, MultichannelLambda) {
    const auto ts = p4();
    const auto k = summation_constants(SummationMethod::linear, 4, 3, ElementClass::general);
    const auto single = bound_multichannel(ts, 1, 1, ChannelSum::linear, k, 0x1p-24);
    EXPECT_EQ(single.lambda, 1);
    EXPECT_EQ(single.factor, 16);
    const auto pw = bound_multichannel(ts, 64, 1, ChannelSum::pairwise, k, 0x1p-24);
    const auto lin = bound_multichannel(ts, 64, 1, ChannelSum::linear, k, 0x1p-24);
    EXPECT_EQ(pw.lambda, 8);
    EXPECT_EQ(lin.lambda, 64);
    for (int C = 8; C <= 256; ++C)
        for (int dims : {1, 2})
            EXPECT_LT(bound_multichannel(ts, C, dims, ChannelSum::pairwise, k, 0x1p-24).normwise_bound,
                      bound_multichannel(ts, C, dims, ChannelSum::linear, k, 0x1p-24).normwise_bound);
}

TEST(Bounds, ComponentwiseDominatesMeasuredError) {
    std::mt19937_64 rng(7);
    for (const auto& ts : {p4(), p8()}) {
        const ConvPlan plan(ts);
        for (auto order : {DotOrder::linear, DotOrder::huffman}) {
            const auto k = constants_for(ts, plan, order, Precision::fp32);
            const ConvConfig cfg{Precision::fp32, order, ChannelSum::linear};
            for (int dims : {1, 2}) {
                for (int t = 0; t < 300; ++t) {
                    const auto h = random_tensor(rng, dims, 1, ts.kernel_size);
                    const auto x = random_tensor(rng, dims, 1, ts.input_size);
                    const auto y = dims == 1 ? conv_1d(plan, h, x, cfg) : conv_2d(plan, h, x, cfg);
                    const auto ref = conv_direct(h, x, Precision::fp64);
                    const auto r = dims == 1 ? bound_1d(ts, h, x, k, 0x1p-24) : bound_2d(ts, h, x, k, 0x1p-24);
                    double total = 0;
                    for (std::size_t i = 0; i < y.data.size(); ++i) {
                        const double err = std::abs(y.data[i] - ref.data[i]);
                        ASSERT_LE(err, r.componentwise_bounds[i]);
                        total += err;
                    }
                    ASSERT_LE(total / static_cast<double>(y.data.size()), r.normwise_bound);
                }
            }
        }
    }
}

TEST(Bounds, ModifiedBoundDominatesMeasuredError) {
    std::mt19937_64 rng(8);
    for (const auto& ts : {p4(), p8(), build_transform_set(2, 3, parse_points("0,1,-1,inf"))}) {
        const ConvPlan plan(ts);
        const int n = ts.input_size;
        const auto full = summation_constants(SummationMethod::linear, n, ts.kernel_size, ElementClass::general);
        const auto reduced = summation_constants(SummationMethod::linear, n - 1, ts.kernel_size, ElementClass::general);
        const ConvConfig cfg{Precision::fp32, DotOrder::linear, ChannelSum::linear};
        for (int t = 0; t < 300; ++t) {
            const auto h = random_tensor(rng, 1, 1, ts.kernel_size);
            const auto x = random_tensor(rng, 1, 1, n);
            const auto y = conv_1d(plan, h, x, cfg);
            const auto ref = conv_direct(h, x, Precision::fp64);
            const auto b = modified_componentwise_bound(ts, h.data, x.data, full, reduced, 0x1p-24);
            for (std::size_t i = 0; i < y.data.size(); ++i)
                ASSERT_LE(std::abs(y.data[i] - ref.data[i]), b[i]);
        }
    }
    EXPECT_THROW(modified_componentwise_bound(build_transform_set(2, 2, parse_points("0,1,-1")), std::vector<double>(2),
                                              std::vector<double>(3), {}, {}, 0x1p-24),
                 ValidationError);
}

TEST(Conditioning, ScalarCase) {
    const auto ts = build_transform_set(1, 1, parse_points("0"));
    EXPECT_DOUBLE_EQ(conditioning_kappa(ts), 1.0);
    const std::vector<double> h{0.5}, x{-3.0};
    const auto r = condition_bound(ts, h, x);
    EXPECT_DOUBLE_EQ(r.bound, 3.0);
    EXPECT_FALSE(r.singular);
}

TEST(Conditioning, ScalesWithTheLargerInputNorm) {
    const auto ts = p4();
    const std::vector<double> h{0.1, 0.1, 0.1};
    std::vector<double> x{1, -1, 1, 0.5};
    const double b = condition_bound(ts, h, x).bound;
    for (auto& v : x)
        v *= 2;
    EXPECT_DOUBLE_EQ(condition_bound(ts, h, x).bound, 2 * b);
}

TEST(RunningError, ZeroInputGivesZeroBound) {
    const ConvPlan plan(p8());
    std::mt19937_64 rng(9);
    const auto h = random_tensor(rng, 1, 1, 3);
    const auto r = running_error_1d(plan, h, Tensor(1, 1, 8), ConvConfig{});
    for (double b : r.bounds)
        EXPECT_EQ(b, 0);
}

TEST(RunningError, OutputMatchesConvolutionBitForBit) {
    std::mt19937_64 rng(10);
    const ConvPlan plan(p8());
    for (auto p : {Precision::fp32, Precision::fp64, Precision::mixed})
        for (auto o : {DotOrder::linear, DotOrder::huffman})
            for (auto s : {ChannelSum::linear, ChannelSum::pairwise}) {
                const ConvConfig cfg{p, o, s};
                const auto h = random_tensor(rng, 1, 5, 3);
                const auto x = random_tensor(rng, 1, 5, 8);
                EXPECT_EQ(running_error_1d(plan, h, x, cfg).output.data, conv_1d(plan, h, x, cfg).data);
            }
}

TEST(RunningError, BoundsTheActualError) {
    std::mt19937_64 rng(11);
    for (const auto& ts : {p4(), p8()}) {
        const ConvPlan plan(ts);
        for (auto p : {Precision::fp32, Precision::mixed}) {
            const ConvConfig cfg{p, DotOrder::huffman, ChannelSum::linear};
            for (int t = 0; t < 500; ++t) {
                const auto h = random_tensor(rng, 1, 1, ts.kernel_size);
                const auto x = random_tensor(rng, 1, 1, ts.input_size);
                const auto r = running_error_1d(plan, h, x, cfg);
                const auto ref = conv_direct(h, x, Precision::fp64);
                for (std::size_t i = 0; i < r.bounds.size(); ++i)
                    ASSERT_LE(std::abs(r.output.data[i] - ref.data[i]), r.bounds[i] * (1 + 1e-6));
            }
        }
    }
}

TEST(Bounds, TwoDimensionalTracksTheSquareOfOneDimensional) {
    std::vector<double> ratios;
    for (int n = 4; n <= 10; ++n) {
        const auto ts = build_transform_set(3, n - 2, curated_points(CuratedTable::fp32, n, 1));
        const ConvPlan plan(ts);
        const auto k = constants_for(ts, plan, DotOrder::huffman, Precision::fp32);
        Tensor h(1, 1, 3), x(1, 1, n), H(2, 1, 3), X(2, 1, n);
        h(0, 0) = x(0, 0) = H(0, 0, 0) = X(0, 0, 0) = 1;
        const double one = bound_1d(ts, h, x, k, 0x1p-24).normwise_bound;
        const double two = bound_2d(ts, H, X, k, 0x1p-24).normwise_bound;
        ratios.push_back(two / (one * one));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_LE(*hi / *lo, 10.0);
}

TEST(Conditioning, ScalarBoundWithUnitMatrices) {
    const auto ts = build_transform_set(1, 1, parse_points("0"));
    EXPECT_EQ(ts.AT(0, 0), Rational(1));
    EXPECT_EQ(ts.G(0, 0), Rational(1));
    EXPECT_EQ(ts.BT(0, 0), Rational(1));
}

// Registered as its own ctest entry: the square-system kappa does not grow
// monotonically over these sets.
TEST(ConditioningTrend, GrowsMonotonicallyOverCuratedSets) {
    double previous = 0;
    for (int n = 4; n <= 12; ++n) {
        const auto ts = build_transform_set(3, n - 2, curated_points(CuratedTable::fp32, n, 1));
        const double kappa = conditioning_kappa(ts);
        EXPECT_GT(kappa, previous) << "n = " << n;
        previous = kappa;
    }
}
