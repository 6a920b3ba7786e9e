// Copyright 2026 The qpi Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qpi {

// Base class for every error raised by the library. The CLI maps the
// subclasses below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied parameters or configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Config-file problems; carries the offending key (or line) for diagnostics.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// A policy-evaluation backend failed inside policy iteration.
class EvaluatorError : public Error {
 public:
  EvaluatorError(int iteration, const std::string& what)
      : Error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// HHL ancilla post-selection probability fell below the usable floor.
class PostSelectionError : public Error {
 public:
  PostSelectionError(double probability, const std::string& what)
      : Error(what), probability_(probability) {}
  double probability() const noexcept { return probability_; }

 private:
  double probability_;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

// QRAM query whose coupling-induced error floor already exceeds the target.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Gate-count grid cell that the register cannot support.
class DisallowedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpi
