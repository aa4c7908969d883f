#pragma once

#include <stdexcept>
#include <string>

namespace fairrank {

/// Base of every error raised by the library. `code()` is a stable
/// identifier that the CLI writes into its error record.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define FAIRRANK_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

FAIRRANK_DEFINE_ERROR(InvariantViolation);
FAIRRANK_DEFINE_ERROR(InvalidArgument);
FAIRRANK_DEFINE_ERROR(UnknownEntity);
FAIRRANK_DEFINE_ERROR(MissingUserGroups);

FAIRRANK_DEFINE_ERROR(SchemaError);
FAIRRANK_DEFINE_ERROR(ParseError);
FAIRRANK_DEFINE_ERROR(FormatError);
FAIRRANK_DEFINE_ERROR(EmptyDataset);
FAIRRANK_DEFINE_ERROR(IoError);
FAIRRANK_DEFINE_ERROR(VersionError);

FAIRRANK_DEFINE_ERROR(UndefinedMetric);
FAIRRANK_DEFINE_ERROR(UnknownQuery);

FAIRRANK_DEFINE_ERROR(EmptyCandidates);

FAIRRANK_DEFINE_ERROR(ZeroPopularity);
FAIRRANK_DEFINE_ERROR(DivergenceError);

FAIRRANK_DEFINE_ERROR(ConfigError);
FAIRRANK_DEFINE_ERROR(UnknownKeyError);
FAIRRANK_DEFINE_ERROR(UnsupportedStage);

#undef FAIRRANK_DEFINE_ERROR

}  // namespace fairrank
