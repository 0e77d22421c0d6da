#pragma once

// Batch front-end: reads JSON specifications, runs one computation and
// writes a deterministic JSON report.

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahcert::cli {

inline constexpr const char* kToolName = "ahcert";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUnknownPresent = 2, kInputError = 3 };

/// Malformed input; `location` is a JSON pointer into the input file (or
/// "argv" / "file" for problems outside it).
class InputError : public std::runtime_error {
 public:
  InputError(std::string location, const std::string& message)
      : std::runtime_error(message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// args excludes the program name. Report goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ahcert::cli
