#pragma once

#include <stdexcept>
#include <string>

namespace frostman {

// Bad user input: malformed files, out-of-range points, unknown flags.
// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input whose parameters cannot be satisfied
// (s > t, required level beyond n_max, ...).  CLI exit code 3.
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// File-format failures keep a machine-readable kind so tests can tell
// a bad checksum from a truncated stream.
class format_error : public input_error {
 public:
  enum class kind { bad_magic, bad_version, truncated, bad_checksum, invalid_structure };

  format_error(kind k, const std::string& what) : input_error(what), kind_(k) {}
  kind which() const { return kind_; }

 private:
  kind kind_;
};

}  // namespace frostman
