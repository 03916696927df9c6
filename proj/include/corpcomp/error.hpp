#ifndef CORPCOMP_ERROR_HPP
#define CORPCOMP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corpcomp {

// Base of every error the library raises for bad input data. The CLI maps
// these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed XML/TMX or invalid UTF-8. Carries the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A requested language is not present in a document.
class LanguageError : public Error {
 public:
  using Error::Error;
};

// Preconditions on data values (empty corpus, too few documents, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Pearson's r is undefined because one of the vectors is constant.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

}  // namespace corpcomp

#endif  // CORPCOMP_ERROR_HPP
