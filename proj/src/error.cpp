#include "emodeng/error.hpp"

namespace emodeng {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column,
                    const std::string& source) {
  std::string out = source.empty() ? std::string("line ") : source + ":";
  out += std::to_string(line);
  out += ":" + std::to_string(column) + ": " + message;
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column,
                       std::string source)
    : Error(located(message, line, column, source)),
      line_(line),
      column_(column),
      source_(std::move(source)),
      bare_(message) {}

}  // namespace emodeng
