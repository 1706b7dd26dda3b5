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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toomcook/bounds.hpp"
#include "toomcook/conv.hpp"
#include "toomcook/errors.hpp"
#include "toomcook/harness.hpp"
#include "toomcook/transform_set.hpp"

namespace toomcook {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Transform sets

namespace detail {

template <typename T, typename F>
Json matrix_json(const Matrix<T>& m, F&& cell) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (const auto& v : m.row(r))
            row.push_back(cell(v));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json exact_json(const Matrix<Rational>& m) {
    return matrix_json(m, [](const Rational& v) { return v.to_string(); });
}

inline Json double_json(const Matrix<double>& m) {
    return matrix_json(m, [](double v) { return v; });
}

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type");
    }
}

inline Matrix<Rational> parse_exact(const Json& j, const char* key) {
    const auto rows = field<std::vector<std::vector<std::string>>>(j, key);
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix<Rational> m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw ValidationError(std::string("ragged matrix '") + key + "'");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = Rational::parse(rows[r][c]);
    }
    return m;
}

} // namespace detail

/// Exact matrices as fraction strings plus their fp64 roundings.
inline Json to_json(const TransformSet& ts) {
    Json j;
    j["n_h"] = ts.kernel_size;
    j["n_o"] = ts.output_size;
    j["n"] = ts.input_size;
    j["modified"] = ts.modified;
    Json pts = Json::array();
    for (const auto& p : ts.points)
        pts.push_back(p.to_string());
    j["points"] = std::move(pts);
    j["A_T"] = detail::exact_json(ts.AT);
    j["G"] = detail::exact_json(ts.G);
    j["B_T"] = detail::exact_json(ts.BT);
    j["A_T_fp64"] = detail::double_json(ts.AT64);
    j["G_fp64"] = detail::double_json(ts.G64);
    j["B_T_fp64"] = detail::double_json(ts.BT64);
    return j;
}

/// Rebuilds from (n_h, n_o, points); stored exact matrices, when present,
/// must agree with the rebuilt ones.
inline TransformSet transform_set_from_json(const Json& j) {
    const int n_h = detail::field<int>(j, "n_h");
    const int n_o = detail::field<int>(j, "n_o");
    std::vector<Point> points;
    for (const auto& s : detail::field<std::vector<std::string>>(j, "points"))
        points.push_back(Point::parse(s));
    auto ts = build_transform_set(n_h, n_o, points);
    const auto check = [&](const char* key, const Matrix<Rational>& built) {
        if (!j.contains(key))
            return;
        const auto stored = detail::parse_exact(j, key);
        if (stored.rows() != built.rows() || stored.cols() != built.cols() || stored.data() != built.data())
            throw ValidationError(std::string("matrix '") + key + "' does not match the points");
    };
    check("A_T", ts.AT);
    check("G", ts.G);
    check("B_T", ts.BT);
    return ts;
}

/// Fraction grid, columns right-aligned.
inline std::string format_matrix(const Matrix<Rational>& m) {
    std::vector<std::string> cells;
    std::size_t width = 1;
    for (const auto& v : m.data()) {
        cells.push_back(v.to_string());
        width = std::max(width, cells.back().size());
    }
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const auto& s = cells[r * m.cols() + c];
            out += std::string(width - s.size() + (c ? 2 : 0), ' ') + s;
        }
        out += '\n';
    }
    return out;
}

inline std::string format_text(const TransformSet& ts) {
    std::ostringstream os;
    os << "F(" << ts.output_size << "," << ts.kernel_size << ") points " << format_points(ts.points)
       << (ts.modified ? " (modified)" : "") << "\n\nA^T\n"
       << format_matrix(ts.AT) << "\nG\n"
       << format_matrix(ts.G) << "\nB^T\n"
       << format_matrix(ts.BT);
    return os.str();
}

// ---------------------------------------------------------------------------
// Tensors

inline Json to_json(const Tensor& t) {
    Json j;
    j["dims"] = t.dims;
    j["channels"] = t.channels;
    j["size"] = t.size;
    j["data"] = t.data;
    return j;
}

inline Tensor tensor_from_json(const Json& j) {
    Tensor t(detail::field<int>(j, "dims"), detail::field<int>(j, "channels"), detail::field<int>(j, "size"));
    auto data = detail::field<std::vector<double>>(j, "data");
    if (data.size() != t.data.size())
        throw ValidationError("tensor data has " + std::to_string(data.size()) + " values, shape needs " +
                              std::to_string(t.data.size()));
    t.data = std::move(data);
    return t;
}

/// Shape header line "dims,channels,size", then one line per channel (1D)
/// or per channel row (2D).
inline std::string tensor_to_csv(const Tensor& t) {
    std::string out = "dims,channels,size\n" + std::to_string(t.dims) + ',' + std::to_string(t.channels) + ',' +
                      std::to_string(t.size) + '\n';
    const auto width = static_cast<std::size_t>(t.size);
    char buf[40];
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", t.data[i]);
        out += buf;
        out += (i + 1) % width == 0 ? '\n' : ',';
    }
    return out;
}

inline Tensor tensor_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line.rfind("dims,channels,size", 0) != 0)
        throw ValidationError("tensor CSV must start with the header 'dims,channels,size'");
    int dims = 0, channels = 0, size = 0;
    std::getline(in, line);
    if (std::sscanf(line.c_str(), "%d,%d,%d", &dims, &channels, &size) != 3)
        throw ValidationError("bad tensor CSV shape line '" + line + "'");
    Tensor t(dims, channels, size);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            if (k == t.data.size())
                throw ValidationError("tensor CSV has more values than its shape");
            try {
                t.data[k++] = std::stod(cell);
            } catch (const std::exception&) {
                throw ValidationError("bad tensor CSV value '" + cell + "'");
            }
        }
    }
    if (k != t.data.size())
        throw ValidationError("tensor CSV has " + std::to_string(k) + " values, shape needs " +
                              std::to_string(t.data.size()));
    return t;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const ConvConfig& c) {
    return Json{{"precision", to_string(c.precision)},
                {"dot_order", to_string(c.dot_order)},
                {"channel_sum", to_string(c.channel_sum)}};
}

inline Json to_json(const ErrorReport& r, bool with_trials = false) {
    Json j;
    j["points"] = r.is_direct() ? "direct" : r.points;
    j["n_h"] = r.kernel_size;
    j["n_o"] = r.output_size;
    j["n"] = r.input_size;
    j["modified"] = r.modified;
    j["dims"] = r.dims;
    j["channels"] = r.channels;
    j["config"] = to_json(r.config);
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["total_l1_mean"] = r.total_l1_mean;
    j["per_point_l1_mean"] = r.per_point_l1_mean;
    if (with_trials)
        j["per_trial"] = r.per_trial;
    return j;
}

inline Json to_json(const RatioEstimate& r) {
    return Json{{"ratio", r.ratio}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"resamples", r.resamples}};
}

inline Json to_json(const SummationConstants& c) {
    return Json{{"method", to_string(c.method)},
                {"element_class", to_string(c.element_class)},
                {"alpha", c.alpha},
                {"beta", c.beta},
                {"gamma", c.gamma}};
}

inline Json to_json(const BoundReport& b) {
    Json j;
    j["dims"] = b.dims;
    j["channels"] = b.channels;
    j["epsilon"] = b.epsilon;
    j["normwise_bound"] = b.normwise_bound;
    j["componentwise_bounds"] = b.componentwise_bounds;
    j["norms"] = Json{{"A_T_one", b.at_one_norm},
                      {"A_one", b.a_one_norm},
                      {"G_frobenius", b.g_frobenius},
                      {"B_T_frobenius", b.bt_frobenius},
                      {"h", b.h_norm},
                      {"x", b.x_norm}};
    j["lambda"] = b.lambda;
    j["factor"] = b.factor;
    j["constants"] = to_json(b.constants);
    return j;
}

inline Json to_json(const ConditionReport& c) {
    Json j;
    j["kappa"] = c.singular ? Json(nullptr) : Json(c.kappa);
    j["bound"] = c.singular ? Json(nullptr) : Json(c.bound);
    j["singular"] = c.singular;
    return j;
}

inline Json to_json(const std::vector<SearchCandidate>& ranked) {
    Json out = Json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& c = ranked[i];
        out.push_back(Json{{"rank", i + 1},
                           {"points", format_points(c.points)},
                           {"per_point_l1_mean", c.report.per_point_l1_mean},
                           {"versus_best", to_json(c.versus_best)},
                           {"tied_with_best", c.tied_with_best}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read '" + path.string() + "'");
    return os.str();
}

inline Json read_json(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

/// Writes to a sibling temporary and renames, so readers never see a
/// half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("cannot write '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

inline TransformSet load_transform_set(const std::filesystem::path& path) {
    return transform_set_from_json(read_json(path));
}

/// .csv by extension, JSON otherwise.
inline Tensor load_tensor(const std::filesystem::path& path) {
    if (path.extension() == ".csv")
        return tensor_from_csv(read_file(path));
    return tensor_from_json(read_json(path));
}

} // namespace toomcook
