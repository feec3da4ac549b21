#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paydev {

// Process exit codes used by the command-line tool. Library errors carry one
// of these so the front end can map failures without string matching.
enum class ErrorCode : int {
  usage = 1,              // bad arguments or configuration
  io = 2,                 // missing or unreadable file
  schema = 3,             // malformed input, schema violation
  column_mismatch = 4,    // model/feature column sets differ
  single_class = 5,       // training labels contain one class only
  too_few_per_class = 6,  // fold count exceeds a class count
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

// Raised by the git-log reader. Offsets are bytes from the start of the stream,
// record indices are zero-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset, std::size_t record_index)
      : Error(ErrorCode::schema, "record " + std::to_string(record_index) + " at byte " +
                                     std::to_string(byte_offset) + ": " + what),
        byte_offset_(byte_offset),
        record_index_(record_index) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }
  std::size_t record_index() const noexcept { return record_index_; }

 private:
  std::size_t byte_offset_;
  std::size_t record_index_;
};

class DuplicateRecordError : public Error {
 public:
  explicit DuplicateRecordError(const std::string& sha)
      : Error(ErrorCode::schema, "duplicate commit " + sha), sha_(sha) {}

  const std::string& sha() const noexcept { return sha_; }

 private:
  std::string sha_;
};

}  // namespace paydev
