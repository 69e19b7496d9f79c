// Copyright 2026 The pedcrit Authors
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

#ifndef PEDCRIT__SRC__JSON_UTIL_HPP_
#define PEDCRIT__SRC__JSON_UTIL_HPP_

// Field accessors that report a locus such as `frames[2].av.speed`.

#include "pedcrit/error.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>
#include <string_view>

namespace pedcrit::detail
{

using json = nlohmann::json;

inline std::string line_locus(std::string_view text, std::size_t byte)
{
  const auto end = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
  return "line " + std::to_string(line);
}

inline json parse_json(std::string_view text)
{
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    throw ParseError(line_locus(text, e.byte), e.what());
  }
}

inline std::string child(const std::string & path, std::string_view key)
{
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string child(const std::string & path, std::size_t index)
{
  return path + "[" + std::to_string(index) + "]";
}

inline const json & field(const json & obj, std::string_view key, const std::string & path)
{
  if (!obj.is_object()) {
    throw ParseError(path, "expected an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(child(path, key), "missing field");
  }
  return *it;
}

inline double number(const json & j, const std::string & path)
{
  if (!j.is_number()) {
    throw ParseError(path, "expected a number");
  }
  return j.get<double>();
}

inline int integer(const json & j, const std::string & path)
{
  if (!j.is_number_integer()) {
    throw ParseError(path, "expected an integer");
  }
  return j.get<int>();
}

inline std::string string(const json & j, const std::string & path)
{
  if (!j.is_string()) {
    throw ParseError(path, "expected a string");
  }
  return j.get<std::string>();
}

inline const json & array(const json & j, const std::string & path)
{
  if (!j.is_array()) {
    throw ParseError(path, "expected an array");
  }
  return j;
}

template <int N>
Eigen::Matrix<double, N, 1> vector_n(const json & j, const std::string & path)
{
  if (!j.is_array() || j.size() != N) {
    throw ParseError(path, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    v[i] = number(j[static_cast<std::size_t>(i)], child(path, static_cast<std::size_t>(i)));
  }
  return v;
}

inline Eigen::Matrix3d matrix3(const json & j, const std::string & path)
{
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(path, "expected a 3x3 array");
  }
  Eigen::Matrix3d m;
  for (std::size_t r = 0; r < 3; ++r) {
    m.row(static_cast<Eigen::Index>(r)) = vector_n<3>(j[r], child(path, r)).transpose();
  }
  return m;
}

}  // namespace pedcrit::detail

#endif  // PEDCRIT__SRC__JSON_UTIL_HPP_
