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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/point.hpp"

namespace toomcook {

/// Published good point sets for kernel size 3, n = 4..18. Table "fp32" sets
/// were selected for fp32 transforms, "mixed" sets for fp64 transforms with
/// fp32 Hadamard products.
struct CuratedSet {
    int n;
    std::string_view one_d;
    std::string_view two_d;
};

inline constexpr int kCuratedKernelSize = 3;

// clang-format off
inline constexpr CuratedSet kCuratedFp32[] = {
    {4,  "0,-1,1,inf",
         "0,-1,1,inf"},
    {5,  "0,-1,1,1/2,inf",
         "0,-1,1,1/2,inf"},
    {6,  "0,-1,1,1/2,-3,inf",
         "0,-1,1,1/2,-2,inf"},
    {7,  "0,-1,1,1/2,-1/2,-3,inf",
         "0,-1,1,1/2,-2,-1/2,inf"},
    {8,  "0,-1,1,1/2,-1/2,2,-2,inf",
         "0,-1,1,1/2,-1/2,2,-2,inf"},
    {9,  "0,-1,1,1/2,-1/2,2,-2,-1/4,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,inf"},
    {10, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,inf"},
    {11, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,inf",
         "-1,1,1/2,-1/2,2,-2,-1/4,4,3/4,-4/3,inf"},
    {12, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,3/4,-4/3,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,3/4,-4/3,inf"},
    {13, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,3/4,-4/3,1/4,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,3/4,-4/3,1/4,inf"},
    {14, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,inf"},
    {15, "-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,inf",
         "-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,3/4,-4/3,inf"},
    {16, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,3/4,-4/3,inf"},
    {17, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,3/2,inf"},
    {18, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,3/2,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,3/2,inf"},
};

inline constexpr CuratedSet kCuratedMixed[] = {
    {4,  "0,-1,1,inf",
         "0,-1,1,inf"},
    {5,  "0,-1,1,3,inf",
         "0,-1,1,3,inf"},
    {6,  "0,-1,1,3,-1/2,inf",
         "0,-1,1,3,-1/2,inf"},
    {7,  "0,-1,1,3,-1/2,1/2,inf",
         "0,-1,1,3,-1/2,1/2,inf"},
    {8,  "0,-1,1,-1/2,1/2,-2,2,inf",
         "0,-1,1,-1/2,1/2,-2,2,inf"},
    {9,  "0,-1,1,-1/2,1/2,-2,2,-1/4,inf",
         "0,-1,1,-1/2,1/2,-2,2,4,inf"},
    {10, "0,-1,1,-1/2,1/2,-2,2,-1/4,4,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,inf"},
    {11, "0,-1,1,-1/2,1/2,-2,2,-1/4,4,1/4,inf",
         "-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,inf"},
    {12, "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,inf"},
    {13, "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,-4,inf"},
    {14, "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,-4,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,-4,inf"},
    {15, "-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,inf",
         "-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,-4,-3/4,4/3,inf"},
    {16, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,-4,-3/4,4/3,inf"},
    {17, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,inf",
         "0,-1,1,-1/2,1/2,-2,2,-1/4,4,3/4,-4/3,1/4,-4,-3/4,4/3,3/2,inf"},
    {18, "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,3/2,inf",
         "0,-1,1,1/2,-1/2,2,-2,-1/4,4,1/4,-3/4,4/3,-4,2/3,-3/2,-2/3,3/2,inf"},
};
// clang-format on

enum class CuratedTable { fp32, mixed };

inline std::span<const CuratedSet> curated_sets(CuratedTable which) {
    if (which == CuratedTable::fp32)
        return kCuratedFp32;
    return kCuratedMixed;
}

inline std::vector<Point> curated_points(CuratedTable which, int n, int dims) {
    if (dims != 1 && dims != 2)
        throw ValidationError("dims must be 1 or 2");
    for (const auto& s : curated_sets(which))
        if (s.n == n)
            return parse_points(dims == 1 ? s.one_d : s.two_d);
    throw ValidationError("no curated point set for n = " + std::to_string(n));
}

} // namespace toomcook
