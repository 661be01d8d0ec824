/*
   Copyright 2026 The qlq Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef QLQ_ERRORS_HPP
#define QLQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qlq {

enum class ErrorKind {
    DivisionByZero,
    DenominatorZero,
    DepthGuardExceeded,
    SquareGenerator,
    ZeroGenerator,
    TowerMismatch,
    ExactModeRequired,
    SplitForm,
    NotASubform,
    ZeroScalar,
    NotDefinedOverSquares,
    NotAnisotropic,
    ParameterOutOfRange,
    PreconditionFailed,
    UnknownName,
    SyntaxError,
    NotApplicable,
    ExponentOverflow,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

/* parse failure with a 0-based character offset into the input */
class SyntaxError : public Error {
   public:
    SyntaxError(std::size_t column, const std::string& what)
        : Error(ErrorKind::SyntaxError, "column " + std::to_string(column) + ": " + what),
          column_(column) {}
    std::size_t column() const noexcept { return column_; }

   private:
    std::size_t column_;
};

}  // namespace qlq

#endif
