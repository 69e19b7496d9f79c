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

#ifndef PEDCRIT__ERROR_HPP_
#define PEDCRIT__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace pedcrit
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `locus` is "line N" and/or a field path such as
/// `frames[2].pedestrians[0].body_radius`.
class ParseError : public Error
{
public:
  ParseError(std::string locus, const std::string & what)
  : Error(locus + ": " + what), locus_(std::move(locus))
  {
  }
  const std::string & locus() const { return locus_; }

private:
  std::string locus_;
};

/// A loaded value violates a declared type invariant.
class InvariantError : public Error
{
public:
  InvariantError(std::string frame_id, std::string field, const std::string & what)
  : Error("frame '" + frame_id + "', field '" + field + "': " + what),
    frame_id_(std::move(frame_id)),
    field_(std::move(field))
  {
  }
  const std::string & frame_id() const { return frame_id_; }
  const std::string & field() const { return field_; }

private:
  std::string frame_id_;
  std::string field_;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Consecutive centerline pieces are farther apart than the joint tolerance.
class DiscontinuousMapError : public Error
{
public:
  using Error::Error;
};

/// Arc-length query outside [0, length].
class OutOfPathError : public Error
{
public:
  using Error::Error;
};

class CalibrationError : public Error
{
public:
  using Error::Error;
};

/// A pedestrian item reached the loss or curation stage without a criticality value.
class MissingAnnotationError : public Error
{
public:
  using Error::Error;
};

}  // namespace pedcrit

#endif  // PEDCRIT__ERROR_HPP_
