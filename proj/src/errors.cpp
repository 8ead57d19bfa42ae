#include "ctxprob/errors.hpp"

#include <sstream>

namespace ctxprob {
namespace {

std::string describe(std::size_t offset, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::ostringstream out;
  out << "syntax error at offset " << offset << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
    out << expected[i];
  }
  out << ", found " << found;
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& found)
    : Error(describe(offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace ctxprob
