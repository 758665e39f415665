#pragma once

#include <stdexcept>
#include <string>

namespace maxrep {

// Errors raised by the library. Exit-code mapping in the CLI keys off
// `category()`: configuration problems versus numeric failures.
class Error : public std::runtime_error {
public:
  enum class Category { configuration, numeric };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

private:
  Category category_;
};

#define MAXREP_DEFINE_ERROR(Name, Cat)                                        \
  class Name : public Error {                                                 \
  public:                                                                     \
    explicit Name(const std::string& what) : Error(Category::Cat, what) {}    \
  }

MAXREP_DEFINE_ERROR(InvalidParameter, configuration);
MAXREP_DEFINE_ERROR(ConfigParseError, configuration);
MAXREP_DEFINE_ERROR(UnknownMarginal, configuration);
MAXREP_DEFINE_ERROR(UnsupportedMarginal, configuration);
MAXREP_DEFINE_ERROR(GridMismatch, configuration);
MAXREP_DEFINE_ERROR(SupportTooLarge, configuration);
MAXREP_DEFINE_ERROR(NonPSDCovariance, numeric);
MAXREP_DEFINE_ERROR(DomainError, numeric);
MAXREP_DEFINE_ERROR(QuadratureFailure, numeric);

#undef MAXREP_DEFINE_ERROR

// Prefixes the message of a library error with a field name, keeping its type.
[[noreturn]] void rethrow_with_field(const std::string& field);

} // namespace maxrep
