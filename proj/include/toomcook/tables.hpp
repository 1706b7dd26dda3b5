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

#include <array>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "toomcook/curated.hpp"
#include "toomcook/errors.hpp"
#include "toomcook/harness.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

/// Exact value rounded half-to-even to `places` decimals, trailing zeros
/// dropped: 5/3 -> "1.67", 3/2 -> "1.5", 2 -> "2".
inline std::string decimal_string(const Rational& v, int places = 2) {
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i)
        scale *= 10;
    const mpq_class scaled = v.raw() * scale;
    mpz_class q, r;
    const mpz_class num = abs(scaled.get_num());
    const mpz_class den = scaled.get_den();
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const int cmp = ::cmp(mpz_class(2 * r), den);
    if (cmp > 0 || (cmp == 0 && mpz_odd_p(q.get_mpz_t())))
        ++q;
    std::string digits = q.get_str();
    if (static_cast<int>(digits.size()) <= places)
        digits.insert(0, static_cast<std::size_t>(places + 1) - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(places));
    std::string frac = digits.substr(digits.size() - static_cast<std::size_t>(places));
    while (!frac.empty() && frac.back() == '0')
        frac.pop_back();
    if (!frac.empty())
        out += "." + frac;
    if (scaled < 0 && out != "0")
        out.insert(0, "-");
    return out;
}

/// One row of the multiplication-count table: for each of the kernels 3,
/// 3x3, 5, 5x5 the output block and general multiplications per output, or
/// "-" when the point count leaves no Toom-Cook block of size >= 2.
struct MultRow {
    int points = 0; // 0: direct convolution
    std::array<std::string, 4> output;
    std::array<std::string, 4> mults_per_output;
};

inline std::vector<MultRow> multiplication_table(int max_points = 16) {
    const int kernels[4] = {3, 3, 5, 5};
    const int dims[4] = {1, 2, 1, 2};
    std::vector<MultRow> rows;
    std::vector<int> counts{0};
    for (int n = 4; n <= max_points; ++n)
        counts.push_back(n);
    for (int n : counts) {
        MultRow row;
        row.points = n;
        for (int c = 0; c < 4; ++c) {
            const int no = n == 0 ? 1 : n - kernels[c] + 1;
            if (n != 0 && no < 2) {
                row.output[static_cast<std::size_t>(c)] = "-";
                row.mults_per_output[static_cast<std::size_t>(c)] = "-";
                continue;
            }
            const auto mc = mult_count(kernels[c], no, dims[c]);
            row.output[static_cast<std::size_t>(c)] =
                dims[c] == 1 ? std::to_string(no) : std::to_string(no) + "x" + std::to_string(no);
            row.mults_per_output[static_cast<std::size_t>(c)] = decimal_string(mc.mults_per_output);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Measured tables

struct TableOptions {
    MeasureOptions measure;           // trials, seed, threads; channels is set per cell
    DotOrder dot_order = DotOrder::huffman;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2E", v);
    return buf;
}

inline std::string fixed(double v, int places) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

inline MeasureOptions with_channels(MeasureOptions o, int channels) {
    o.channels = channels;
    o.keep_trials = false;
    return o;
}

inline ErrorReport curated_report(CuratedTable table, int n, int dims, Precision precision, ChannelSum sum,
                                  int channels, const TableOptions& opt) {
    const ConvConfig cfg{precision, opt.dot_order, sum};
    const auto mo = with_channels(opt.measure, channels);
    if (n == 0)
        return measure_direct(kCuratedKernelSize, dims, cfg, mo);
    const auto ts = build_transform_set(kCuratedKernelSize, n - kCuratedKernelSize + 1, curated_points(table, n, dims));
    return measure_error(ts, dims, cfg, mo);
}

} // namespace detail

/// Per-point fp32 error of the curated sets, n = 0 (direct) and 4..18.
struct PointSetRow {
    int n = 0;
    std::string points_1d, points_2d;
    int output_size = 1;
    double error_1d = 0, error_2d = 0;             // per point
    double total_error_1d = 0, total_error_2d = 0; // per convolution
};

inline std::vector<PointSetRow> point_set_table(CuratedTable table, Precision precision, const TableOptions& opt) {
    std::vector<PointSetRow> rows;
    std::vector<int> ns{0};
    for (const auto& s : curated_sets(table))
        ns.push_back(s.n);
    for (int n : ns) {
        PointSetRow row;
        row.n = n;
        row.points_1d = n == 0 ? "direct" : std::string(curated_sets(table)[static_cast<std::size_t>(n - 4)].one_d);
        row.points_2d = n == 0 ? "direct" : std::string(curated_sets(table)[static_cast<std::size_t>(n - 4)].two_d);
        row.output_size = n == 0 ? 1 : n - kCuratedKernelSize + 1;
        const auto r1 = detail::curated_report(table, n, 1, precision, ChannelSum::linear, 1, opt);
        const auto r2 = detail::curated_report(table, n, 2, precision, ChannelSum::linear, 1, opt);
        row.error_1d = r1.per_point_l1_mean;
        row.error_2d = r2.per_point_l1_mean;
        row.total_error_1d = r1.total_l1_mean;
        row.total_error_2d = r2.total_l1_mean;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Error per output point over C channels for output sizes 1..max_output
/// (1 is direct convolution); sets come from the fp32 or mixed curated table.
struct ChannelRow {
    int output_size = 0;
    double single = 0;
    double linear_32 = 0, pairwise_32 = 0;
    double linear_64 = 0, pairwise_64 = 0;
    [[nodiscard]] double ratio_32() const { return pairwise_32 / linear_32; }
    [[nodiscard]] double ratio_64() const { return pairwise_64 / linear_64; }
};

inline std::vector<ChannelRow> channel_table(int dims, Precision precision, const TableOptions& opt, int max_output = 7) {
    const auto table = precision == Precision::mixed ? CuratedTable::mixed : CuratedTable::fp32;
    std::vector<ChannelRow> rows;
    for (int no = 1; no <= max_output; ++no) {
        const int n = no == 1 ? 0 : no + kCuratedKernelSize - 1;
        auto cell = [&](ChannelSum s, int c) {
            return detail::curated_report(table, n, dims, precision, s, c, opt).per_point_l1_mean;
        };
        ChannelRow row;
        row.output_size = no;
        row.single = cell(ChannelSum::linear, 1);
        row.linear_32 = cell(ChannelSum::linear, 32);
        row.pairwise_32 = cell(ChannelSum::pairwise, 32);
        row.linear_64 = cell(ChannelSum::linear, 64);
        row.pairwise_64 = cell(ChannelSum::pairwise, 64);
        rows.push_back(row);
    }
    return rows;
}

/// Mixed precision with pairwise channel sums against fp32 with linear sums.
struct CombinedRow {
    int output_size = 0;
    double ratio_1d_32 = 0, ratio_1d_64 = 0, ratio_2d_32 = 0, ratio_2d_64 = 0;
};

inline std::vector<CombinedRow> combined_table(const TableOptions& opt, int max_output = 7) {
    std::vector<CombinedRow> rows;
    for (int no = 1; no <= max_output; ++no) {
        const int n = no == 1 ? 0 : no + kCuratedKernelSize - 1;
        auto ratio = [&](int dims, int c) {
            const double mixed =
                detail::curated_report(CuratedTable::mixed, n, dims, Precision::mixed, ChannelSum::pairwise, c, opt)
                    .per_point_l1_mean;
            const double fp32 =
                detail::curated_report(CuratedTable::fp32, n, dims, Precision::fp32, ChannelSum::linear, c, opt)
                    .per_point_l1_mean;
            return mixed / fp32;
        };
        rows.push_back({no, ratio(1, 32), ratio(1, 64), ratio(2, 32), ratio(2, 64)});
    }
    return rows;
}

struct ChebyshevTableRow {
    int n = 0;
    double ratio_1d = 0, ratio_2d = 0;
};

inline std::vector<ChebyshevTableRow> chebyshev_table(const TableOptions& opt, int first = 4, int last = 18) {
    std::vector<ChebyshevTableRow> rows;
    const ConvConfig cfg{Precision::fp32, opt.dot_order, ChannelSum::linear};
    const auto mo = detail::with_channels(opt.measure, 1);
    for (int n = first; n <= last; ++n) {
        ChebyshevTableRow row;
        row.n = n;
        row.ratio_1d = compare_chebyshev(n, 1, curated_points(CuratedTable::fp32, n, 1), cfg, mo).ratio;
        row.ratio_2d = compare_chebyshev(n, 2, curated_points(CuratedTable::fp32, n, 2), cfg, mo).ratio;
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline const std::vector<std::string>& table_ids() {
    static const std::vector<std::string> ids{"1", "2", "3", "4", "5", "6", "7", "8", "D"};
    return ids;
}

inline std::string reproduce_table(const std::string& which, const TableOptions& opt) {
    std::ostringstream os;
    using detail::fixed;
    using detail::sci;
    if (which == "1") {
        os << "points,output_k3,mults_k3,output_k3x3,mults_k3x3,output_k5,mults_k5,output_k5x5,mults_k5x5\n";
        for (const auto& r : multiplication_table()) {
            os << r.points;
            for (std::size_t c = 0; c < 4; ++c)
                os << ',' << r.output[c] << ',' << r.mults_per_output[c];
            os << '\n';
        }
    } else if (which == "2") {
        os << "n,points_1d,error_1d,total_error_1d,n_o,points_2d,error_2d,total_error_2d,n_o_2d\n";
        for (const auto& r : point_set_table(CuratedTable::fp32, Precision::fp32, opt))
            os << r.n << ",\"" << r.points_1d << "\"," << sci(r.error_1d) << ',' << sci(r.total_error_1d) << ','
               << r.output_size << ",\"" << r.points_2d << "\"," << sci(r.error_2d) << ',' << sci(r.total_error_2d)
               << ',' << r.output_size << 'x' << r.output_size << '\n';
    } else if (which == "3") {
        const auto base = point_set_table(CuratedTable::fp32, Precision::fp32, opt);
        const auto mixed = point_set_table(CuratedTable::mixed, Precision::mixed, opt);
        os << "n,points_1d,error_1d,n_o,ratio_1d,points_2d,error_2d,ratio_2d\n";
        for (std::size_t i = 0; i < mixed.size(); ++i) {
            const auto& r = mixed[i];
            os << r.n << ",\"" << r.points_1d << "\"," << sci(r.error_1d) << ',' << r.output_size << ','
               << fixed(r.error_1d / base[i].error_1d, 2) << ",\"" << r.points_2d << "\"," << sci(r.error_2d) << ','
               << fixed(r.error_2d / base[i].error_2d, 2) << '\n';
        }
    } else if (which == "4" || which == "5" || which == "6" || which == "7") {
        const int dims = which == "4" || which == "6" ? 1 : 2;
        const auto precision = which == "4" || which == "5" ? Precision::fp32 : Precision::mixed;
        os << "n_o,c1,c32,c32_pairwise,ratio_32_pct,c64,c64_pairwise,ratio_64_pct\n";
        for (const auto& r : channel_table(dims, precision, opt)) {
            os << r.output_size;
            if (dims == 2)
                os << 'x' << r.output_size;
            os << ',' << sci(r.single) << ',' << sci(r.linear_32) << ',' << sci(r.pairwise_32) << ','
               << fixed(100 * r.ratio_32(), 0) << ',' << sci(r.linear_64) << ',' << sci(r.pairwise_64) << ','
               << fixed(100 * r.ratio_64(), 0) << '\n';
        }
    } else if (which == "8") {
        os << "n_o,ratio_1d_c32_pct,ratio_1d_c64_pct,ratio_2d_c32_pct,ratio_2d_c64_pct\n";
        for (const auto& r : combined_table(opt))
            os << r.output_size << ',' << fixed(100 * r.ratio_1d_32, 0) << ',' << fixed(100 * r.ratio_1d_64, 0) << ','
               << fixed(100 * r.ratio_2d_32, 0) << ',' << fixed(100 * r.ratio_2d_64, 0) << '\n';
    } else if (which == "D" || which == "d") {
        os << "n,ratio_1d,ratio_2d\n";
        for (const auto& r : chebyshev_table(opt))
            os << r.n << ',' << fixed(r.ratio_1d, 2) << ',' << fixed(r.ratio_2d, 2) << '\n';
    } else {
        throw ValidationError("unknown table '" + which + "'; expected one of 1-8 or D");
    }
    return os.str();
}

} // namespace toomcook
