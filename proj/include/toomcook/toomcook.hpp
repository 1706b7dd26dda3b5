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

#include "toomcook/bounds.hpp"
#include "toomcook/conv.hpp"
#include "toomcook/curated.hpp"
#include "toomcook/errors.hpp"
#include "toomcook/eval_tree.hpp"
#include "toomcook/exact.hpp"
#include "toomcook/harness.hpp"
#include "toomcook/io.hpp"
#include "toomcook/matrix.hpp"
#include "toomcook/norms.hpp"
#include "toomcook/point.hpp"
#include "toomcook/polynomial.hpp"
#include "toomcook/rational.hpp"
#include "toomcook/rng.hpp"
#include "toomcook/running_error.hpp"
#include "toomcook/svd.hpp"
#include "toomcook/tables.hpp"
#include "toomcook/transform_set.hpp"
