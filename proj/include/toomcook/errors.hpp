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

#include <stdexcept>
#include <string>

namespace toomcook {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad point syntax, duplicate points,
/// shape mismatches.
struct ValidationError : Error {
    using Error::Error;
};

/// File or stream failures.
struct IoError : Error {
    using Error::Error;
};

/// Division by zero, overflow on rounding, singular matrices.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace toomcook
