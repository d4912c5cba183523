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

#ifndef GRADATE_JSON_UTIL_HPP_
#define GRADATE_JSON_UTIL_HPP_

#include <Eigen/Dense>

#include <filesystem>
#include <string>

#include "json.hpp"

namespace gradate {

/// Parses `text`; syntax errors become SchemaError carrying line and column.
nlohmann::json parse_json_document(const std::string& text, const std::string& what);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);

/// Reads a rows x cols matrix; throws SchemaError naming `field` on shape or type errors.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

}  // namespace gradate

#endif  // GRADATE_JSON_UTIL_HPP_
