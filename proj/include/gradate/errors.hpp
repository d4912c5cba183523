// Copyright 2026 The gradate Authors
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

#ifndef GRADATE_ERRORS_HPP_
#define GRADATE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gradate {

// Bad argument values: out-of-range hyperparameters, shape mismatches,
// infeasible counts.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Node id outside [0, N).
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed dataset, model, or config documents.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph invariant violations (self-loops, asymmetric storage, row counts).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An augmentation that cannot be carried out on the given graph.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or failed linear solves.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gradate

#endif  // GRADATE_ERRORS_HPP_
