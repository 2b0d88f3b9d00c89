#ifndef QTG_ERRORS_HPP
#define QTG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtg {

/// Instance text rejected; carries the 1-based offending line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// A configured work limit was exceeded (DP cell updates, tree states).
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qtg

#endif // QTG_ERRORS_HPP
