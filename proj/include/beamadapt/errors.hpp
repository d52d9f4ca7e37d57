// SPDX-License-Identifier: Apache-2.0
//
// beamadapt: pose-aware beamwidth adaptation for planar receive arrays
// Copyright (C) 2026 The beamadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace beamadapt
{

// Input outside the mathematical domain of an operation (non-positive distance,
// non positive-definite covariance, empty integration grid, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Array factor requested for a mask with no active element.
class DegenerateBeamError : public DomainError
{
public:
    using DomainError::DomainError;
};

// Experiment configuration rejected at load time. key() names the offending
// "section.key" (empty when the problem is not tied to one key).
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string &message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string &key() const { return key_; }

private:
    std::string key_;
};

// File system failure; path() is the file or directory involved.
class IoError : public std::runtime_error
{
public:
    IoError(std::string path, const std::string &message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string &path() const { return path_; }

private:
    std::string path_;
};

} // namespace beamadapt
