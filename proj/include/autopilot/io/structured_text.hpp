#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace autopilot::io {

/// INI-like document: `[section]` headers, `key = value` lines, `#` comments.
/// Section names may repeat; keys within one section may not.
struct Field {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Field> fields;

  [[nodiscard]] const Field* find(std::string_view key) const;
};

struct Document {
  std::string source;
  std::vector<Section> sections;

  [[nodiscard]] std::vector<const Section*> all(std::string_view name) const;
  [[nodiscard]] const Section* first(std::string_view name) const;
};

/// One or more located problems with a configuration document.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  [[nodiscard]] const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

class Diagnostics {
 public:
  void add(const std::string& source, int line, const std::string& message);
  /// Takes over diagnostics that already carry their location.
  void merge(const ConfigError& error);
  [[nodiscard]] bool empty() const { return messages_.empty(); }
  void throw_if_any() const;

 private:
  std::vector<std::string> messages_;
};

Document parse_structured_text(std::istream& in, std::string source = "<input>");
Document parse_structured_text_file(const std::filesystem::path& path);

/// Typed access to one section. Problems are recorded, not thrown, so a whole
/// document can be checked in one pass.
class SectionReader {
 public:
  SectionReader(const Document& doc, const Section& section, Diagnostics& diag);

  /// NaN-free value; missing required fields are reported.
  double number(std::string_view key);
  std::optional<double> optional_number(std::string_view key);
  double number_or(std::string_view key, double fallback);
  double positive(std::string_view key);
  long long integer_or(std::string_view key, long long fallback);
  std::string text(std::string_view key);
  std::string text_or(std::string_view key, std::string fallback);
  bool flag_or(std::string_view key, bool fallback);
  /// Comma-separated numbers.
  std::optional<std::vector<double>> optional_list(std::string_view key);
  /// Reports every field that was never read.
  void reject_unknown();
  void error(std::string_view key, const std::string& message);

 private:
  const Field* lookup(std::string_view key);

  const Document& doc_;
  const Section& section_;
  Diagnostics& diag_;
  std::set<std::string, std::less<>> used_;
};

}  // namespace autopilot::io
