// Copyright 2026 The Infoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef INFOPLAN_ERROR_HPP_
#define INFOPLAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace infoplan {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad parameters, shapes, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computation produced a non-finite or non-physical result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace infoplan

#endif  // INFOPLAN_ERROR_HPP_
