#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxprob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CTXPROB_DEFINE_ERROR(Name)        \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

CTXPROB_DEFINE_ERROR(InvalidSpace);
CTXPROB_DEFINE_ERROR(MemberOutOfSpace);
CTXPROB_DEFINE_ERROR(ZeroConditioningEvent);
CTXPROB_DEFINE_ERROR(UnknownPredicate);
CTXPROB_DEFINE_ERROR(InvalidModel);
CTXPROB_DEFINE_ERROR(UnknownProperty);
CTXPROB_DEFINE_ERROR(UnknownContext);
CTXPROB_DEFINE_ERROR(UnknownState);
CTXPROB_DEFINE_ERROR(InvalidRegistry);
CTXPROB_DEFINE_ERROR(NotJointlyTestable);
CTXPROB_DEFINE_ERROR(NoProcedure);
CTXPROB_DEFINE_ERROR(NotInDomain);
CTXPROB_DEFINE_ERROR(PostconditionViolated);
CTXPROB_DEFINE_ERROR(InvalidLattice);
CTXPROB_DEFINE_ERROR(DimensionMismatch);
CTXPROB_DEFINE_ERROR(InvalidOperator);
CTXPROB_DEFINE_ERROR(ZeroProbabilityBranch);
CTXPROB_DEFINE_ERROR(IncompatibleGroup);
CTXPROB_DEFINE_ERROR(IrrationalBornValue);

#undef CTXPROB_DEFINE_ERROR

/// Raised by the formula parser. Carries the byte offset of the offending
/// input and the set of tokens that would have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              const std::string& found);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace ctxprob
