/*
 *    Copyright 2026 The icsize Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ICSIZE_ERROR_HPP
#define ICSIZE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icsize
{

/// Raised for anything the caller can fix: malformed files, invalid
/// parameters, out-of-bounds configurations. The CLI maps it to exit code 2.
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Syntax or validation error tied to a line of an input file.
class ParseError : public InputError
{
public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace icsize

#endif
