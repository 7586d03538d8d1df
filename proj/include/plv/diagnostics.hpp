#pragma once

#include <stdexcept>
#include <string>

namespace plv {

// Syntax error with source position and the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col, std::string token = "")
        : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col) +
                             (token.empty() ? "" : " near '" + token + "'")),
          line(line),
          col(col),
          token(std::move(token)) {}

    int line;
    int col;
    std::string token;
};

// Raised when a configured search/iteration bound is exceeded. Checkers
// translate this into an explicit inconclusive result, never a silent pass.
class BoundError : public std::runtime_error {
public:
    explicit BoundError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace plv
