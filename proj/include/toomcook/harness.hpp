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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "toomcook/conv.hpp"
#include "toomcook/errors.hpp"
#include "toomcook/point.hpp"
#include "toomcook/rng.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

struct MeasureOptions {
    int trials = 5000;
    std::uint64_t seed = 0;
    int channels = 1;
    int threads = 0; // 0: one per hardware thread
    bool keep_trials = true;
};

/// Mean L1 error of one (triple, dims, config) experiment against an fp64
/// direct convolution. An empty points string denotes direct convolution.
struct ErrorReport {
    std::string points;
    int kernel_size = 0;
    int output_size = 0;
    int input_size = 0;
    bool modified = false;
    int dims = 1;
    int channels = 1;
    ConvConfig config;
    int trials = 0;
    std::uint64_t seed = 0;
    double total_l1_mean = 0;
    double per_point_l1_mean = 0;
    std::vector<double> per_trial; // total L1 of each trial

    [[nodiscard]] bool is_direct() const { return points.empty(); }
    [[nodiscard]] int outputs() const { return dims == 1 ? output_size : output_size * output_size; }
};

namespace detail {

inline Tensor draw_tensor(RandomStream& rng, int dims, int channels, int size) {
    Tensor t(dims, channels, size);
    for (auto& v : t.data)
        v = rng.uniform_fp32();
    return t;
}

inline double l1_distance(const Tensor& a, const Tensor& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        s += std::abs(a.data[i] - b.data[i]);
    return s;
}

// Runs body(trial) for every trial, split into contiguous ranges over
// worker threads; results are written by index so the order of execution
// never matters.
template <typename Body>
void for_each_trial(int trials, int threads, Body&& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, trials);
    if (workers <= 1) {
        for (int t = 0; t < trials; ++t)
            body(t);
        return;
    }
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(static_cast<long>(trials) * w / workers);
        const int hi = static_cast<int>(static_cast<long>(trials) * (w + 1) / workers);
        pool.emplace_back([&body, lo, hi] {
            for (int t = lo; t < hi; ++t)
                body(t);
        });
    }
}

template <typename Run>
ErrorReport measure(ErrorReport r, const MeasureOptions& opt, Run&& run) {
    if (opt.trials < 1)
        throw ValidationError("trials must be >= 1");
    if (opt.channels < 1)
        throw ValidationError("channels must be >= 1");
    r.channels = opt.channels;
    r.trials = opt.trials;
    r.seed = opt.seed;
    std::vector<double> errors(static_cast<std::size_t>(opt.trials));
    for_each_trial(opt.trials, opt.threads, [&](int t) {
        RandomStream rng(opt.seed, static_cast<std::uint64_t>(t));
        const auto h = draw_tensor(rng, r.dims, opt.channels, r.kernel_size);
        const auto x = draw_tensor(rng, r.dims, opt.channels, r.input_size);
        const auto reference = conv_direct(h, x, Precision::fp64, ChannelSum::linear);
        errors[static_cast<std::size_t>(t)] = l1_distance(run(h, x), reference);
    });
    double sum = 0;
    for (double e : errors)
        sum += e;
    r.total_l1_mean = sum / opt.trials;
    r.per_point_l1_mean = r.total_l1_mean / r.outputs();
    if (opt.keep_trials)
        r.per_trial = std::move(errors);
    return r;
}

inline ErrorReport report_header(const TransformSet& ts, int dims, const ConvConfig& cfg) {
    if (dims != 1 && dims != 2)
        throw ValidationError("dims must be 1 or 2");
    ErrorReport r;
    r.points = format_points(ts.points);
    r.kernel_size = ts.kernel_size;
    r.output_size = ts.output_size;
    r.input_size = ts.input_size;
    r.modified = ts.modified;
    r.dims = dims;
    r.config = cfg;
    return r;
}

} // namespace detail

/// Each trial draws a fresh kernel and input, uniform on (-1, 1) in fp32,
/// from the Philox stream (seed, trial index).
inline ErrorReport measure_error(const TransformSet& ts, const ConvPlan& plan, int dims, const ConvConfig& cfg,
                                 const MeasureOptions& opt = {}) {
    auto r = detail::report_header(ts, dims, cfg);
    return detail::measure(std::move(r), opt, [&](const Tensor& h, const Tensor& x) {
        return dims == 1 ? conv_1d(plan, h, x, cfg) : conv_2d(plan, h, x, cfg);
    });
}

inline ErrorReport measure_error(const TransformSet& ts, int dims, const ConvConfig& cfg, const MeasureOptions& opt = {}) {
    return measure_error(ts, ConvPlan(ts), dims, cfg, opt);
}

/// Direct convolution with a single output per channel, computed in fp32
/// (fp64 when cfg asks for it) with the configured channel summation.
inline ErrorReport measure_direct(int kernel_size, int dims, const ConvConfig& cfg, const MeasureOptions& opt = {}) {
    if (dims != 1 && dims != 2)
        throw ValidationError("dims must be 1 or 2");
    if (kernel_size < 1)
        throw ValidationError("kernel size must be >= 1");
    ErrorReport r;
    r.kernel_size = kernel_size;
    r.output_size = 1;
    r.input_size = kernel_size;
    r.dims = dims;
    r.config = cfg;
    return detail::measure(std::move(r), opt, [&](const Tensor& h, const Tensor& x) {
        return conv_direct(h, x, cfg.precision, cfg.channel_sum);
    });
}

/// Ratio of per-point means a / b with a paired percentile bootstrap over
/// trials.
struct RatioEstimate {
    double ratio = 1;
    double ci_low = 1;
    double ci_high = 1;
    int resamples = 0;

    [[nodiscard]] bool contains_one() const { return ci_low <= 1.0 && 1.0 <= ci_high; }
};

inline constexpr std::uint64_t kBootstrapSeed = 0x5eed;

inline RatioEstimate compare_reports(const ErrorReport& a, const ErrorReport& b, int resamples = 1000,
                                     std::uint64_t seed = kBootstrapSeed) {
    if (a.dims != b.dims)
        throw ValidationError("compare_reports: reports have different dims");
    if (a.trials != b.trials || a.seed != b.seed || a.channels != b.channels)
        throw ValidationError("compare_reports: reports come from different trial streams");
    if (a.per_point_l1_mean == 0 && b.per_point_l1_mean == 0)
        return {1, 1, 1, 0};
    RatioEstimate r;
    r.ratio = a.per_point_l1_mean / b.per_point_l1_mean;
    r.ci_low = r.ci_high = r.ratio;
    if (resamples <= 0 || a.per_trial.size() != static_cast<std::size_t>(a.trials) ||
        b.per_trial.size() != static_cast<std::size_t>(b.trials))
        return r;
    r.resamples = resamples;
    const double scale = static_cast<double>(b.outputs()) / a.outputs();
    const auto T = static_cast<std::uint32_t>(a.trials);
    std::vector<double> ratios(static_cast<std::size_t>(resamples));
    for (int k = 0; k < resamples; ++k) {
        RandomStream rng(seed, static_cast<std::uint64_t>(k));
        double sa = 0, sb = 0;
        for (std::uint32_t i = 0; i < T; ++i) {
            const auto j = rng.below(T);
            sa += a.per_trial[j];
            sb += b.per_trial[j];
        }
        ratios[static_cast<std::size_t>(k)] = sb > 0 ? sa / sb * scale : INFINITY;
    }
    std::sort(ratios.begin(), ratios.end());
    const auto at = [&](double q) {
        const auto i = static_cast<std::size_t>(std::clamp(std::floor(q * (resamples - 1) + 0.5), 0.0, resamples - 1.0));
        return ratios[i];
    };
    r.ci_low = at(0.025);
    r.ci_high = at(0.975);
    return r;
}

// ---------------------------------------------------------------------------
// Point search

/// Candidate pool: rationals with numerator in -4..4 and denominator 1..4.
inline std::vector<Point> candidate_pool() {
    std::vector<Rational> values;
    for (long d = 1; d <= 4; ++d)
        for (long p = -4; p <= 4; ++p) {
            const Rational v{mpz_class(p), mpz_class(d)};
            if (std::find(values.begin(), values.end(), v) == values.end())
                values.push_back(v);
        }
    std::vector<Point> out;
    for (const auto& v : values)
        out.emplace_back(v);
    return out;
}

/// Points that make a pair with p: -p, 1/p and -1/p; 0 and infinity pair
/// with each other.
inline std::vector<Point> partners(const Point& p) {
    if (p.is_infinity())
        return {Point(0)};
    const Rational& v = p.value();
    if (v.is_zero())
        return {Point::infinity()};
    std::vector<Point> out{Point(-v), Point(Rational(1) / v), Point(-(Rational(1) / v))};
    std::vector<Point> unique;
    for (const auto& q : out)
        if (q != p && std::find(unique.begin(), unique.end(), q) == unique.end())
            unique.push_back(q);
    return unique;
}

inline bool has_point(const std::vector<Point>& set, const Point& p) {
    return std::find(set.begin(), set.end(), p) != set.end();
}

/// Points of the set none of whose partners is in the set.
inline std::vector<Point> unpaired_points(const std::vector<Point>& set) {
    std::vector<Point> out;
    for (const auto& p : set) {
        const auto ps = partners(p);
        if (std::none_of(ps.begin(), ps.end(), [&](const Point& q) { return has_point(set, q); }))
            out.push_back(p);
    }
    return out;
}

namespace detail {

// Finite points keep their order; infinity, when present, goes last.
inline std::vector<Point> with_infinity_last(std::vector<Point> set) {
    std::stable_partition(set.begin(), set.end(), [](const Point& p) { return !p.is_infinity(); });
    return set;
}

inline std::vector<Point> sorted_copy(std::vector<Point> set) {
    std::sort(set.begin(), set.end());
    return set;
}

} // namespace detail

/// Sets of size n reachable from base (size n - 1): base plus one pool point,
/// and for even n also base minus one unpaired point plus a pair {p, partner}.
inline std::vector<std::vector<Point>> expansion_moves(const std::vector<Point>& base, int n) {
    if (static_cast<int>(base.size()) != n - 1)
        throw ValidationError("expansion_moves: base must hold n - 1 points");
    const auto pool = candidate_pool();
    std::vector<std::vector<Point>> out;
    std::vector<std::vector<Point>> seen;
    auto emit = [&](std::vector<Point> set) {
        auto key = detail::sorted_copy(set);
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            return;
        seen.push_back(std::move(key));
        out.push_back(detail::with_infinity_last(std::move(set)));
    };
    for (const auto& p : pool) {
        if (has_point(base, p))
            continue;
        auto set = base;
        set.push_back(p);
        emit(std::move(set));
    }
    if (n % 2 == 0) {
        for (const auto& drop : unpaired_points(base)) {
            std::vector<Point> rest;
            for (const auto& q : base)
                if (q != drop)
                    rest.push_back(q);
            for (const auto& p : pool) {
                for (const auto& partner : partners(p)) {
                    if (p == drop && has_point(base, partner))
                        continue;
                    if (has_point(rest, p) || has_point(rest, partner))
                        continue;
                    if (partner.is_infinity() || !has_point(pool, partner))
                        continue;
                    auto set = rest;
                    set.push_back(p);
                    set.push_back(partner);
                    emit(std::move(set));
                }
            }
        }
    }
    return out;
}

struct SearchCandidate {
    std::vector<Point> points;
    ErrorReport report;
    RatioEstimate versus_best; // this candidate / the best one
    bool tied_with_best = false;
};

/// Current best point sets per (n, dims), seeded with {0, -1, 1, inf}.
struct SearchState {
    std::map<std::pair<int, int>, std::vector<Point>> best;

    SearchState() {
        best[{4, 1}] = parse_points("0,-1,1,inf");
        best[{4, 2}] = parse_points("0,-1,1,inf");
    }
    [[nodiscard]] const std::vector<Point>& at(int n, int dims) const {
        const auto it = best.find({n, dims});
        if (it == best.end())
            throw ValidationError("search state has no set for n = " + std::to_string(n));
        return it->second;
    }
};

/// Measures every expansion of the state's (n - 1)-point set with a shared
/// seed and ranks them by per-point error. Candidates whose bootstrap ratio
/// against the best contains 1 are marked as ties. The best set is stored
/// back into the state.
inline std::vector<SearchCandidate> search_points(int n, int dims, SearchState& state, const ConvConfig& cfg,
                                                  const MeasureOptions& opt = {}, int kernel_size = 3) {
    if (n < 4)
        throw ValidationError("search_points needs n >= 4; the seeded base set has 4 points");
    const int output_size = n - kernel_size + 1;
    if (output_size < 1)
        throw ValidationError("search_points: n too small for the kernel size");
    // n = 4 is the seed itself
    const auto moves = n == 4 ? std::vector<std::vector<Point>>{state.at(4, dims)} : expansion_moves(state.at(n - 1, dims), n);
    std::vector<SearchCandidate> out;
    for (const auto& set : moves) {
        const auto ts = build_transform_set(kernel_size, output_size, set);
        out.push_back({set, measure_error(ts, dims, cfg, opt), {}, false});
    }
    std::stable_sort(out.begin(), out.end(), [](const SearchCandidate& a, const SearchCandidate& b) {
        return a.report.per_point_l1_mean < b.report.per_point_l1_mean;
    });
    for (auto& c : out) {
        c.versus_best = compare_reports(c.report, out.front().report);
        c.tied_with_best = c.versus_best.contains_one();
    }
    state.best[{n, dims}] = out.front().points;
    return out;
}

// ---------------------------------------------------------------------------
// Chebyshev comparison and growth

enum class ChebyshevLayout {
    finite,        // n Chebyshev nodes, unmodified algorithm
    with_infinity, // n - 1 Chebyshev nodes and infinity
};

inline std::vector<Point> chebyshev_set(int n, ChebyshevLayout layout) {
    if (layout == ChebyshevLayout::finite)
        return chebyshev_points(n);
    auto p = chebyshev_points(n - 1);
    p.push_back(Point::infinity());
    return p;
}

struct ChebyshevRow {
    int n = 0;
    ErrorReport chebyshev;
    ErrorReport curated;
    double ratio = 0; // chebyshev / curated
};

inline ChebyshevRow compare_chebyshev(int n, int dims, const std::vector<Point>& curated, const ConvConfig& cfg,
                                      const MeasureOptions& opt = {}, ChebyshevLayout layout = ChebyshevLayout::with_infinity,
                                      int kernel_size = 3) {
    if (n < 4)
        throw ValidationError("compare_chebyshev needs n >= 4");
    const int no = n - kernel_size + 1;
    ChebyshevRow row;
    row.n = n;
    row.chebyshev = measure_error(build_transform_set(kernel_size, no, chebyshev_set(n, layout)), dims, cfg, opt);
    row.curated = measure_error(build_transform_set(kernel_size, no, curated), dims, cfg, opt);
    row.ratio = row.chebyshev.per_point_l1_mean / row.curated.per_point_l1_mean;
    return row;
}

struct GrowthSample {
    int n = 0;
    double error_1d = 0;
    double error_2d = 0;
};

struct GrowthStats {
    std::vector<int> n;
    std::vector<double> dlog_1d; // log(e[n]) - log(e[n - 1]), one per consecutive pair
    std::vector<double> dlog_2d;
    double fit_constant = 0;     // c in y = x^2 / c, x and y relative to direct convolution
};

/// Differences of natural logs between consecutive sizes and a least
/// squares fit of y = x^2 / c, where x = error_1d / direct_1d and
/// y = error_2d / direct_2d.
inline GrowthStats growth_analysis(std::vector<GrowthSample> samples, double direct_1d, double direct_2d) {
    if (samples.size() < 3)
        throw ValidationError("growth_analysis needs at least 3 sizes");
    if (!(direct_1d > 0) || !(direct_2d > 0))
        throw ValidationError("growth_analysis needs positive direct-convolution errors");
    std::sort(samples.begin(), samples.end(), [](const GrowthSample& a, const GrowthSample& b) { return a.n < b.n; });
    GrowthStats g;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.error_1d > 0) || !(s.error_2d > 0))
            throw ValidationError("growth_analysis needs positive errors");
        g.n.push_back(s.n);
        if (i > 0) {
            g.dlog_1d.push_back(std::log(s.error_1d) - std::log(samples[i - 1].error_1d));
            g.dlog_2d.push_back(std::log(s.error_2d) - std::log(samples[i - 1].error_2d));
        }
        const double x = s.error_1d / direct_1d;
        const double y = s.error_2d / direct_2d;
        num += x * x * x * x;
        den += x * x * y;
    }
    g.fit_constant = num / den;
    return g;
}

} // namespace toomcook
