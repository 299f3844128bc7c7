#pragma once

#include <stdexcept>
#include <string>

namespace qmt {

// Failure while reading a textual or XML source, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int col)
      : std::runtime_error(message + " (line " + std::to_string(line) +
                           ", column " + std::to_string(col) + ")"),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace qmt
