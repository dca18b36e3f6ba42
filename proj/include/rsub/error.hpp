#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsub {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A caller passed a malformed value (empty word, letter out of range, ...).
  class InvalidArgument : public Error {
   public:
    using Error::Error;
  };

  // The substitution does not satisfy the hypothesis an analysis needs, e.g.
  // perron_analysis on an incompatible substitution.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // Reading or writing a file failed.
  class IoError : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::string const& what)
        : Error("line " + std::to_string(line) + ": " + what), _line(line) {}

    std::size_t line() const noexcept {
      return _line;
    }

   private:
    std::size_t _line;
  };

}  // namespace rsub
