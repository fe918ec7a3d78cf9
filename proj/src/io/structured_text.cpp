#include "autopilot/io/structured_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace autopilot::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string located(const std::string& source, int line, const std::string& message) {
  std::ostringstream os;
  os << source << ':' << line << ": " << message;
  return os.str();
}

}  // namespace

const Field* Section::find(std::string_view key) const {
  for (const Field& f : fields)
    if (f.key == key) return &f;
  return nullptr;
}

std::vector<const Section*> Document::all(std::string_view name) const {
  std::vector<const Section*> out;
  for (const Section& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

const Section* Document::first(std::string_view name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
        std::string msg;
        for (std::size_t i = 0; i < diagnostics.size(); ++i) msg += (i ? "\n" : "") + diagnostics[i];
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

void Diagnostics::add(const std::string& source, int line, const std::string& message) {
  messages_.push_back(located(source, line, message));
}

void Diagnostics::merge(const ConfigError& error) {
  messages_.insert(messages_.end(), error.diagnostics().begin(), error.diagnostics().end());
}

void Diagnostics::throw_if_any() const {
  if (!messages_.empty()) throw ConfigError(messages_);
}

Document parse_structured_text(std::istream& in, std::string source) {
  Document doc{std::move(source), {}};
  Diagnostics diag;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        diag.add(doc.source, line_no, "unterminated section header");
        continue;
      }
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) {
        diag.add(doc.source, line_no, "invalid section name '" + std::string(name) + "'");
        continue;
      }
      doc.sections.push_back(Section{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diag.add(doc.source, line_no, "expected 'key = value'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!valid_name(key)) {
      diag.add(doc.source, line_no, "invalid key '" + std::string(key) + "'");
      continue;
    }
    if (doc.sections.empty()) {
      diag.add(doc.source, line_no, "field '" + std::string(key) + "' appears before any section header");
      continue;
    }
    Section& sec = doc.sections.back();
    if (const Field* prev = sec.find(key)) {
      diag.add(doc.source, line_no,
               "duplicate field '" + std::string(key) + "' (first set on line " + std::to_string(prev->line) + ")");
      continue;
    }
    sec.fields.push_back(Field{std::string(key), std::string(value), line_no});
  }
  diag.throw_if_any();
  return doc;
}

Document parse_structured_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  return parse_structured_text(in, path.string());
}

SectionReader::SectionReader(const Document& doc, const Section& section, Diagnostics& diag)
    : doc_(doc), section_(section), diag_(diag) {}

const Field* SectionReader::lookup(std::string_view key) {
  used_.emplace(key);
  return section_.find(key);
}

void SectionReader::error(std::string_view key, const std::string& message) {
  const Field* f = section_.find(key);
  diag_.add(doc_.source, f ? f->line : section_.line, "[" + section_.name + "] " + std::string(key) + ": " + message);
}

std::optional<double> SectionReader::optional_number(std::string_view key) {
  const Field* f = lookup(key);
  if (!f) return std::nullopt;
  const auto v = parse_double(f->value);
  if (!v) error(key, "'" + f->value + "' is not a finite number");
  return v;
}

double SectionReader::number(std::string_view key) {
  if (!section_.find(key)) {
    used_.emplace(key);
    diag_.add(doc_.source, section_.line, "[" + section_.name + "] missing field '" + std::string(key) + "'");
    return 0.0;
  }
  return optional_number(key).value_or(0.0);
}

double SectionReader::number_or(std::string_view key, double fallback) {
  return optional_number(key).value_or(fallback);
}

double SectionReader::positive(std::string_view key) {
  const Field* f = section_.find(key);
  const double v = number(key);
  if (f && parse_double(f->value) && !(v > 0.0)) error(key, "must be positive");
  return v;
}

long long SectionReader::integer_or(std::string_view key, long long fallback) {
  const Field* f = lookup(key);
  if (!f) return fallback;
  long long v = 0;
  const auto* end = f->value.data() + f->value.size();
  const auto [ptr, ec] = std::from_chars(f->value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    error(key, "'" + f->value + "' is not an integer");
    return fallback;
  }
  return v;
}

std::string SectionReader::text(std::string_view key) {
  const Field* f = lookup(key);
  if (!f || f->value.empty()) {
    diag_.add(doc_.source, f ? f->line : section_.line,
              "[" + section_.name + "] missing field '" + std::string(key) + "'");
    return {};
  }
  return f->value;
}

std::string SectionReader::text_or(std::string_view key, std::string fallback) {
  const Field* f = lookup(key);
  return f ? f->value : std::move(fallback);
}

bool SectionReader::flag_or(std::string_view key, bool fallback) {
  const Field* f = lookup(key);
  if (!f) return fallback;
  if (f->value == "true" || f->value == "yes" || f->value == "1") return true;
  if (f->value == "false" || f->value == "no" || f->value == "0") return false;
  error(key, "'" + f->value + "' is not a boolean");
  return fallback;
}

std::optional<std::vector<double>> SectionReader::optional_list(std::string_view key) {
  const Field* f = lookup(key);
  if (!f) return std::nullopt;
  std::vector<double> out;
  std::string_view rest = f->value;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    const auto v = parse_double(item);
    if (!v) {
      error(key, "'" + std::string(item) + "' is not a finite number");
      return std::nullopt;
    }
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void SectionReader::reject_unknown() {
  for (const Field& f : section_.fields)
    if (!used_.contains(f.key)) diag_.add(doc_.source, f.line, "[" + section_.name + "] unknown field '" + f.key + "'");
}

}  // namespace autopilot::io
