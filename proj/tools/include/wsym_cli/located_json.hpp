#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wsym::cli {

using json = nlohmann::json;

struct Diagnostic {
  std::string file;
  int line = 0;
  /// JSON pointer of the offending value, empty for the whole document.
  std::string pointer;
  std::string message;

  std::string str() const;
};

/// Malformed input; carries every diagnostic found.
class InputError : public std::runtime_error {
 public:
  explicit InputError(std::vector<Diagnostic> diags);
  explicit InputError(Diagnostic d) : InputError(std::vector<Diagnostic>{std::move(d)}) {}
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// A parsed JSON document that remembers the source line of every value.
class LocatedJson {
 public:
  /// Throws InputError with the line of a syntax error.
  static LocatedJson parse(const std::string& text, std::string file);
  /// Throws InputError if the file cannot be read.
  static LocatedJson load(const std::string& path);

  const json& doc() const { return doc_; }
  const std::string& file() const { return file_; }
  /// Line of the value at pointer, or of its nearest recorded ancestor.
  int line_of(const std::string& pointer) const;
  Diagnostic at(const std::string& pointer, std::string message) const;

 private:
  json doc_;
  std::string file_;
  std::map<std::string, int> lines_;
};

/// Collects diagnostics while checking a LocatedJson against a schema.
class Checker {
 public:
  explicit Checker(const LocatedJson& src) : src_(src) {}

  void error(const std::string& pointer, std::string message);
  bool ok() const { return diags_.empty(); }
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  void throw_if_errors() const;

  const json* get(const std::string& pointer) const;
  /// Reports keys outside allowed; false only when the value is not an object,
  /// so checking can go on past unknown keys.
  bool object(const std::string& pointer, const std::vector<std::string>& allowed);
  bool require(const std::string& pointer);
  bool number(const std::string& pointer, bool positive = false);
  bool integer(const std::string& pointer, long min_value);
  bool boolean(const std::string& pointer);
  bool string_in(const std::string& pointer, const std::vector<std::string>& choices);
  bool number_array(const std::string& pointer, bool positive = false);
  /// Rectangular array of number arrays; reports the shape on success.
  bool matrix(const std::string& pointer, int& rows, int& cols);

 private:
  const LocatedJson& src_;
  std::vector<Diagnostic> diags_;
};

std::string child(const std::string& pointer, const std::string& key);
std::string child(const std::string& pointer, std::size_t index);

}  // namespace wsym::cli
