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
#include <string>
#include <string_view>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/rational.hpp"

namespace toomcook {

/// Interpolation point: a finite rational or the pseudo-point at infinity.
class Point {
  public:
    Point() = default;
    Point(Rational value) : value_(std::move(value)) {} // NOLINT(google-explicit-constructor)
    Point(long value) : value_(value) {}                // NOLINT(google-explicit-constructor)
    Point(int value) : value_(value) {}                 // NOLINT(google-explicit-constructor)

    static Point infinity() {
        Point p;
        p.infinite_ = true;
        return p;
    }

    /// "0", "-1", "1/2", "-4/3", "inf".
    static Point parse(std::string_view text) {
        while (!text.empty() && text.front() == ' ')
            text.remove_prefix(1);
        while (!text.empty() && text.back() == ' ')
            text.remove_suffix(1);
        if (text == "inf" || text == "Inf" || text == "INF" || text == "+inf")
            return infinity();
        return {Rational::parse(text)};
    }

    [[nodiscard]] bool is_infinity() const { return infinite_; }
    [[nodiscard]] bool is_finite() const { return !infinite_; }

    /// Precondition: is_finite().
    [[nodiscard]] const Rational& value() const {
        if (infinite_)
            throw ValidationError("the infinity pseudo-point has no finite value");
        return value_;
    }

    [[nodiscard]] std::string to_string() const { return infinite_ ? "inf" : value_.to_string(); }

    friend bool operator==(const Point& a, const Point& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    /// Total order used for canonical ranking: finite points by value, infinity last.
    friend bool operator<(const Point& a, const Point& b) {
        if (a.infinite_ || b.infinite_)
            return !a.infinite_ && b.infinite_;
        return a.value_ < b.value_;
    }

  private:
    Rational value_;
    bool infinite_ = false;
};

/// Comma separated list, e.g. "0,-1,1,inf".
inline std::vector<Point> parse_points(std::string_view text) {
    std::vector<Point> points;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        points.push_back(Point::parse(text.substr(start, end - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return points;
}

inline std::string format_points(const std::vector<Point>& points) {
    std::string out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i)
            out += ',';
        out += points[i].to_string();
    }
    return out;
}

/// Throws ValidationError if two points coincide or infinity appears twice.
inline void require_distinct(const std::vector<Point>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw ValidationError("duplicate point " + points[i].to_string());
}

} // namespace toomcook
