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

#include <algorithm>
#include <cmath>
#include <set>

#include "toomcook/io.hpp"
#include "toomcook/rng.hpp"
#include "toomcook/tables.hpp"

using namespace toomcook;

namespace {

TransformSet p4() { return build_transform_set(3, 2, parse_points("0,-1,1,inf")); }

MeasureOptions trials(int n, std::uint64_t seed = 0, int threads = 1) {
    MeasureOptions o;
    o.trials = n;
    o.seed = seed;
    o.threads = threads;
    return o;
}

const ConvConfig kFp32{Precision::fp32, DotOrder::huffman, ChannelSum::linear};

bool contains_set(const std::vector<std::vector<Point>>& sets, const std::string& text) {
    auto want = parse_points(text);
    std::sort(want.begin(), want.end());
    return std::any_of(sets.begin(), sets.end(), [&](std::vector<Point> s) {
        std::sort(s.begin(), s.end());
        return s == want;
    });
}

} // namespace

// --- RNG -------------------------------------------------------------------

TEST(Philox, KnownAnswerVectors) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, UniformValuesAreOpenIntervalFp32) {
    RandomStream rng(7, 3);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        const float v = rng.uniform_fp32();
        ASSERT_GT(v, -1.0f);
        ASSERT_LT(v, 1.0f);
        ASSERT_NE(v, 0.0f);
        sum += v;
    }
    EXPECT_LT(std::abs(sum / 20000), 0.02);
}

TEST(RandomStream, StreamsAreIndependentAndReplayable) {
    RandomStream a(1, 0), b(1, 1), a2(1, 0), c(2, 0);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_EQ(x, a2.next_u64());
}

TEST(RandomStream, BelowStaysInRange) {
    RandomStream rng(0, 0);
    std::set<std::uint32_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

// --- measure_error -----------------------------------------------------------

TEST(Measure, SameSeedGivesIdenticalReport) {
    const auto ts = p4();
    const auto a = measure_error(ts, 1, kFp32, trials(300, 5));
    const auto b = measure_error(ts, 1, kFp32, trials(300, 5));
    EXPECT_EQ(to_json(a, true).dump(), to_json(b, true).dump());
}

TEST(Measure, SingleTrialRunTwiceIsIdentical) {
    const auto ts = p4();
    const auto a = measure_error(ts, 2, kFp32, trials(1, 42));
    const auto b = measure_error(ts, 2, kFp32, trials(1, 42));
    EXPECT_EQ(a.per_trial, b.per_trial);
    EXPECT_EQ(a.total_l1_mean, b.total_l1_mean);
}

TEST(Measure, ThreadCountDoesNotChangeTheResult) {
    const auto ts = build_transform_set(3, 4, parse_points("0,-1,1,1/2,-2,inf"));
    const auto one = measure_error(ts, 2, kFp32, trials(400, 9, 1));
    const auto four = measure_error(ts, 2, kFp32, trials(400, 9, 4));
    EXPECT_EQ(one.per_trial, four.per_trial);
    EXPECT_EQ(one.total_l1_mean, four.total_l1_mean);
}

TEST(Measure, DifferentSeedsDiffer) {
    const auto ts = p4();
    EXPECT_NE(measure_error(ts, 1, kFp32, trials(50, 1)).total_l1_mean,
              measure_error(ts, 1, kFp32, trials(50, 2)).total_l1_mean);
}

TEST(Measure, PerPointIsTotalOverOutputs) {
    const auto ts = build_transform_set(3, 3, parse_points("0,-1,1,1/2,inf"));
    const auto r1 = measure_error(ts, 1, kFp32, trials(100));
    const auto r2 = measure_error(ts, 2, kFp32, trials(100));
    EXPECT_DOUBLE_EQ(r1.per_point_l1_mean, r1.total_l1_mean / 3);
    EXPECT_DOUBLE_EQ(r2.per_point_l1_mean, r2.total_l1_mean / 9);
    EXPECT_EQ(r1.per_trial.size(), 100u);
}

TEST(Measure, ZeroTrialsIsRejected) {
    EXPECT_THROW(measure_error(p4(), 1, kFp32, trials(0)), ValidationError);
}

TEST(Measure, Fp64TransformIsFarMoreAccurate) {
    const auto ts = p4();
    const auto f32 = measure_error(ts, 1, kFp32, trials(500));
    const auto f64 = measure_error(ts, 1, {Precision::fp64, DotOrder::huffman, ChannelSum::linear}, trials(500));
    EXPECT_LT(f64.per_point_l1_mean * 1e6, f32.per_point_l1_mean);
}

TEST(Measure, DirectReportShape) {
    const auto r = measure_direct(3, 2, kFp32, trials(200));
    EXPECT_TRUE(r.is_direct());
    EXPECT_EQ(r.outputs(), 1);
    EXPECT_GT(r.per_point_l1_mean, 0.0);
}

// --- compare_reports ---------------------------------------------------------

TEST(CompareReports, IdenticalReportsGiveRatioOne) {
    const auto r = measure_error(p4(), 1, kFp32, trials(500));
    const auto est = compare_reports(r, r);
    EXPECT_DOUBLE_EQ(est.ratio, 1.0);
    EXPECT_DOUBLE_EQ(est.ci_low, 1.0);
    EXPECT_DOUBLE_EQ(est.ci_high, 1.0);
    EXPECT_TRUE(est.contains_one());
}

TEST(CompareReports, IntervalBracketsTheRatio) {
    const auto a = measure_error(p4(), 1, kFp32, trials(1000));
    const auto b = measure_error(p4(), 1, {Precision::mixed, DotOrder::huffman, ChannelSum::linear}, trials(1000));
    const auto est = compare_reports(b, a);
    EXPECT_LE(est.ci_low, est.ratio);
    EXPECT_GE(est.ci_high, est.ratio);
    EXPECT_LT(est.ratio, 1.0);
    EXPECT_FALSE(est.contains_one());
}

TEST(CompareReports, MismatchedExperimentsThrow) {
    const auto a = measure_error(p4(), 1, kFp32, trials(50, 0));
    EXPECT_THROW(compare_reports(a, measure_error(p4(), 2, kFp32, trials(50, 0))), ValidationError);
    EXPECT_THROW(compare_reports(a, measure_error(p4(), 1, kFp32, trials(50, 1))), ValidationError);
    EXPECT_THROW(compare_reports(a, measure_error(p4(), 1, kFp32, trials(60, 0))), ValidationError);
}

// --- search ------------------------------------------------------------------

TEST(Search, CandidatePoolHas23Points) {
    const auto pool = candidate_pool();
    EXPECT_EQ(pool.size(), 23u);
    std::set<std::string> text;
    for (const auto& p : pool) {
        ASSERT_TRUE(p.is_finite());
        const auto& v = p.value();
        EXPECT_LE(v.abs(), Rational(4));
        text.insert(p.to_string());
    }
    EXPECT_EQ(text.size(), 23u);
    for (const char* want : {"0", "1/2", "-4/3", "3/4", "-1/4", "4"})
        EXPECT_TRUE(text.count(want)) << want;
}

TEST(Search, Partners) {
    EXPECT_EQ(partners(Point(0)), std::vector<Point>{Point::infinity()});
    EXPECT_EQ(partners(Point::infinity()), std::vector<Point>{Point(0)});
    EXPECT_EQ(partners(Point(1)), std::vector<Point>{Point(-1)});
    const auto two = partners(Point(2));
    EXPECT_EQ(two, (std::vector<Point>{Point(-2), Point::parse("1/2"), Point::parse("-1/2")}));
}

TEST(Search, UnpairedPoints) {
    const auto u = unpaired_points(parse_points("0,-1,1,1/2,inf"));
    EXPECT_EQ(u, std::vector<Point>{Point::parse("1/2")});
    EXPECT_TRUE(unpaired_points(parse_points("0,-1,1,1/2,-1/2,inf")).empty());
}

TEST(Search, ExpansionMovesFromTheBase) {
    const auto five = expansion_moves(parse_points("0,-1,1,inf"), 5);
    EXPECT_EQ(five.size(), 20u); // every pool point not already present
    EXPECT_TRUE(contains_set(five, "0,-1,1,1/2,inf"));
    for (const auto& s : five)
        EXPECT_NO_THROW(require_distinct(s));

    const auto six = expansion_moves(parse_points("0,-1,1,1/2,inf"), 6);
    EXPECT_TRUE(contains_set(six, "0,-1,1,1/2,-1/2,inf"));
    EXPECT_TRUE(contains_set(six, "0,-1,1,2,-2,inf")); // 1/2 dropped, pair added
    for (const auto& s : six)
        EXPECT_EQ(s.size(), 6u);
    EXPECT_THROW(expansion_moves(parse_points("0,-1,1,inf"), 6), ValidationError);
}

TEST(Search, SizeBelowTheSeedThrows) {
    SearchState state;
    EXPECT_THROW(search_points(3, 1, state, kFp32, trials(10)), ValidationError);
    const auto four = search_points(4, 1, state, kFp32, trials(10));
    ASSERT_EQ(four.size(), 1u);
    EXPECT_EQ(four.front().points, parse_points("0,-1,1,inf"));
}

TEST(Search, RanksAscendingAndStoresTheWinner) {
    SearchState state;
    const auto ranked = search_points(5, 1, state, kFp32, trials(300));
    ASSERT_EQ(ranked.size(), 20u);
    for (std::size_t i = 1; i < ranked.size(); ++i)
        EXPECT_LE(ranked[i - 1].report.per_point_l1_mean, ranked[i].report.per_point_l1_mean);
    EXPECT_TRUE(ranked.front().tied_with_best);
    EXPECT_EQ(state.at(5, 1), ranked.front().points);
}

// --- Chebyshev and growth ----------------------------------------------------

TEST(Chebyshev, Layouts) {
    EXPECT_EQ(chebyshev_set(6, ChebyshevLayout::finite).size(), 6u);
    const auto inf = chebyshev_set(6, ChebyshevLayout::with_infinity);
    EXPECT_EQ(inf.size(), 6u);
    EXPECT_TRUE(inf.back().is_infinity());
    EXPECT_THROW(compare_chebyshev(3, 1, parse_points("0,1,inf"), kFp32, trials(10)), ValidationError);
}

TEST(Growth, RecoversAnExactQuadraticLaw) {
    std::vector<GrowthSample> s;
    for (int n = 4; n <= 8; ++n) {
        const double x = std::exp(0.5 * n);
        s.push_back({n, x * 1e-8, x * x / 3.0 * 2e-8});
    }
    const auto g = growth_analysis(s, 1e-8, 2e-8);
    EXPECT_NEAR(g.fit_constant, 3.0, 1e-12);
    ASSERT_EQ(g.dlog_1d.size(), 4u);
    for (std::size_t i = 0; i < g.dlog_1d.size(); ++i) {
        EXPECT_NEAR(g.dlog_1d[i], 0.5, 1e-12);
        EXPECT_NEAR(g.dlog_2d[i], 1.0, 1e-12);
    }
}

TEST(Growth, TooFewSizesThrow) {
    EXPECT_THROW(growth_analysis({{4, 1e-8, 1e-7}}, 1e-8, 1e-8), ValidationError);
    EXPECT_THROW(growth_analysis({{4, 1e-8, 1e-7}, {5, 2e-8, 3e-7}}, 1e-8, 1e-8), ValidationError);
    EXPECT_THROW(growth_analysis({{4, 1e-8, 1e-7}, {5, 0, 3e-7}, {6, 1e-7, 1e-6}}, 1e-8, 1e-8), ValidationError);
}

// --- curated data and tables -------------------------------------------------

TEST(Curated, BundledDataFileMatchesTheLibrary) {
    const auto j = read_json(std::filesystem::path(TOOMCOOK_DATA_DIR) / "curated_points.json");
    EXPECT_EQ(j.at("kernel_size").get<int>(), kCuratedKernelSize);
    for (auto [key, table] : {std::pair{"fp32", CuratedTable::fp32}, std::pair{"mixed", CuratedTable::mixed}}) {
        const auto& rows = j.at(key);
        ASSERT_EQ(rows.size(), curated_sets(table).size()) << key;
        for (const auto& row : rows) {
            const int n = row.at("n").get<int>();
            EXPECT_EQ(parse_points(row.at("points_1d").get<std::string>()), curated_points(table, n, 1)) << n;
            EXPECT_EQ(parse_points(row.at("points_2d").get<std::string>()), curated_points(table, n, 2)) << n;
        }
    }
}

TEST(Curated, EverySetBuildsWithTheRightSize) {
    for (auto table : {CuratedTable::fp32, CuratedTable::mixed})
        for (const auto& s : curated_sets(table))
            for (int dims : {1, 2}) {
                const auto pts = curated_points(table, s.n, dims);
                ASSERT_EQ(static_cast<int>(pts.size()), s.n);
                EXPECT_NO_THROW(require_distinct(pts));
                EXPECT_TRUE(std::any_of(pts.begin(), pts.end(), [](const Point& p) { return p.is_infinity(); }));
            }
}

TEST(Tables, DecimalStringRoundsHalfToEven) {
    auto r = [](long p, long q) { return Rational(mpz_class(p), mpz_class(q)); };
    EXPECT_EQ(decimal_string(r(5, 3)), "1.67");
    EXPECT_EQ(decimal_string(r(3, 2)), "1.5");
    EXPECT_EQ(decimal_string(r(2, 1)), "2");
    EXPECT_EQ(decimal_string(r(100, 64)), "1.56");
    EXPECT_EQ(decimal_string(r(9, 8)), "1.12");
    EXPECT_EQ(decimal_string(r(227, 200)), "1.14");
    EXPECT_EQ(decimal_string(r(-5, 3)), "-1.67");
    EXPECT_EQ(decimal_string(r(1, 1000)), "0");
}

TEST(Tables, MultiplicationTableIsExactAndStable) {
    const auto a = reproduce_table("1", {});
    EXPECT_EQ(a, reproduce_table("1", {}));
    EXPECT_NE(a.find("\n0,1,3,1x1,9,1,5,1x1,25\n"), std::string::npos);
    EXPECT_NE(a.find("\n4,2,2,2x2,4,-,-,-,-\n"), std::string::npos);
    EXPECT_NE(a.find("\n16,14,1.14,14x14,1.31,12,1.33,12x12,1.78\n"), std::string::npos);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 15);
}

TEST(Tables, UnknownIdThrows) {
    EXPECT_THROW(reproduce_table("9", {}), ValidationError);
    EXPECT_THROW(reproduce_table("", {}), ValidationError);
}

TEST(Tables, MeasuredTableIsDeterministic) {
    TableOptions opt;
    opt.measure = trials(50, 3);
    const auto a = reproduce_table("8", opt);
    EXPECT_EQ(a, reproduce_table("8", opt));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 8);
}
