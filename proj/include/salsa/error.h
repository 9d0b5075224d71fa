// Copyright 2026 The SALSA Workbench Authors.
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

#ifndef SALSA_ERROR_H_
#define SALSA_ERROR_H_

#include <stdexcept>
#include <string>

namespace salsa {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed caller input (empty text, mismatched lengths, duplicate records).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Document failed schema validation. path() points at the offending node.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string &message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

class ClassificationError : public Error {
 public:
  using Error::Error;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

// Krippendorff's alpha (or a pairwise rate) has no defined value.
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

// Workflow submission rejected: wrong stage, unassigned annotator, bad ids.
class WorkflowError : public Error {
 public:
  using Error::Error;
};

class UnassignedAnnotator : public WorkflowError {
 public:
  using WorkflowError::WorkflowError;
};

// Optimistic concurrency conflict (stale or duplicate revision).
class ConflictError : public WorkflowError {
 public:
  using WorkflowError::WorkflowError;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace salsa

#endif  // SALSA_ERROR_H_
