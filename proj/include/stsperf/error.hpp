#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stsperf {

// Error thrown by library operations. `code` is a stable, machine-readable
// token (e.g. "CyclicModel", "NonTermination") that the CLI surfaces verbatim.
class StsError : public std::runtime_error {
public:
    StsError(std::string code, std::string message)
        : std::runtime_error(code + ": " + message),
          code_(std::move(code)),
          message_(std::move(message)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string code_;
    std::string message_;
};

// Parse failure with a source location. line/column are 1-based; 0 means the
// location is unknown.
class ParseError : public StsError {
public:
    ParseError(int line, int column, std::string code, const std::string& message)
        : StsError(std::move(code),
                   "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace stsperf
