#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace annulus::config {

/// Minimal INI document: '[section]' headers, 'key = value' pairs, blank
/// lines and lines starting with '#' or ';' ignored. parse() throws a
/// ConfigError listing every malformed line at once.
class Ini {
 public:
  static Ini parse(const std::string& text);
  static Ini parse_file(const std::string& path);  // IoError when unreadable

  std::optional<std::string> raw(const std::string& section,
                                 const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;
  std::vector<std::string> section_names() const;
  bool has_section(const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Typed access to one document with deferred error reporting: every getter
/// records what it resolved (explicit value or default), and finish() throws
/// one ConfigError carrying the whole list of problems, including keys
/// nobody asked for.
class Reader {
 public:
  explicit Reader(const Ini& ini) : ini_(ini) {}

  double number(const std::string& section, const std::string& key,
                double fallback);
  double require_number(const std::string& section, const std::string& key);
  long integer(const std::string& section, const std::string& key,
               long fallback);
  bool flag(const std::string& section, const std::string& key, bool fallback);
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback);
  std::optional<std::string> optional_text(const std::string& section,
                                           const std::string& key);

  void error(const std::string& message) { errors_.push_back(message); }

  /// "section.key = value" lines for everything resolved so far, in query
  /// order; suitable for echoing into output metadata.
  const std::vector<std::string>& resolved() const { return resolved_; }

  /// Throws ConfigError aggregating all recorded problems plus any keys in
  /// the document that were never consumed.
  void finish();

 private:
  std::optional<std::string> consume(const std::string& section,
                                     const std::string& key);
  void note(const std::string& section, const std::string& key,
            const std::string& value, bool is_default);

  const Ini& ini_;
  std::vector<std::string> errors_;
  std::vector<std::string> resolved_;
  std::map<std::string, std::vector<std::string>> consumed_;
};

/// Two-column numeric table (abscissa, value), whitespace separated, '#'
/// comments allowed. Used for tabulated radial profiles.
std::vector<std::array<double, 2>> read_profile_table(const std::string& path);

}  // namespace annulus::config
