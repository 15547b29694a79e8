/*
 * Copyright 2026 The GALE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gale {

// Every failure raised by the library derives from Error. The CLI maps any
// Error to the data-error exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed number or structure in an input file. Row and column are 1-based
// positions in the file (the header is row 1); zero means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : Error(Format(what, row, col)), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  static std::string Format(const std::string& what, std::size_t row,
                            std::size_t col) {
    if (row == 0) return what;
    std::string s = what + " (row " + std::to_string(row);
    if (col != 0) s += ", column " + std::to_string(col);
    return s + ")";
  }
  std::size_t row_;
  std::size_t col_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class TrainingDivergence : public Error {
 public:
  explicit TrainingDivergence(int epoch)
      : Error("training diverged: non-finite loss at epoch " +
              std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace gale
