#include "annulus/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

}  // namespace

Ini Ini::parse(const std::string& text) {
  Ini ini;
  std::vector<std::string> problems;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        problems.push_back("line " + std::to_string(line_no) +
                           ": malformed section header '" + t + "'");
        continue;
      }
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (section.empty())
        problems.push_back("line " + std::to_string(line_no) +
                           ": empty section name");
      ini.sections_[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) +
                         ": expected 'key = value', got '" + t + "'");
      continue;
    }
    const std::string key = lower(trim(t.substr(0, eq)));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      problems.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    auto& sec = ini.sections_[section];
    if (sec.count(key) != 0) {
      problems.push_back("line " + std::to_string(line_no) + ": duplicate key '" +
                         (section.empty() ? key : section + "." + key) + "'");
      continue;
    }
    sec[key] = value;
  }
  if (!problems.empty()) {
    std::string joined = "configuration has syntax errors:";
    for (const auto& p : problems) joined += "\n  - " + p;
    throw ConfigError(joined);
  }
  return ini;
}

Ini Ini::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read configuration file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Ini::raw(const std::string& section,
                                    const std::string& key) const {
  const auto sec = sections_.find(lower(section));
  if (sec == sections_.end()) return std::nullopt;
  const auto it = sec->second.find(lower(key));
  if (it == sec->second.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Ini::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto sec = sections_.find(lower(section));
  if (sec == sections_.end()) return out;
  out.reserve(sec->second.size());
  for (const auto& [k, _] : sec->second) out.push_back(k);
  return out;
}

std::vector<std::string> Ini::section_names() const {
  std::vector<std::string> out;
  out.reserve(sections_.size());
  for (const auto& [name, _] : sections_) out.push_back(name);
  return out;
}

bool Ini::has_section(const std::string& section) const {
  return sections_.count(lower(section)) != 0;
}

std::optional<std::string> Reader::consume(const std::string& section,
                                           const std::string& key) {
  auto& seen = consumed_[lower(section)];
  const std::string k = lower(key);
  if (std::find(seen.begin(), seen.end(), k) == seen.end()) seen.push_back(k);
  return ini_.raw(section, key);
}

void Reader::note(const std::string& section, const std::string& key,
                  const std::string& value, bool is_default) {
  resolved_.push_back(lower(section) + "." + lower(key) + " = " + value +
                      (is_default ? "  (default)" : ""));
}

double Reader::number(const std::string& section, const std::string& key,
                      double fallback) {
  const auto raw = consume(section, key);
  if (!raw) {
    std::ostringstream os;
    os << fallback;
    note(section, key, os.str(), true);
    return fallback;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(*raw, &pos);
    if (pos != raw->size()) throw std::invalid_argument("trailing characters");
    note(section, key, *raw, false);
    return v;
  } catch (const std::exception&) {
    errors_.push_back(section + "." + key + ": '" + *raw + "' is not a number");
    return fallback;
  }
}

double Reader::require_number(const std::string& section,
                              const std::string& key) {
  const auto raw = consume(section, key);
  if (!raw) {
    errors_.push_back(section + "." + key + " is required");
    return 0.0;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(*raw, &pos);
    if (pos != raw->size()) throw std::invalid_argument("trailing characters");
    note(section, key, *raw, false);
    return v;
  } catch (const std::exception&) {
    errors_.push_back(section + "." + key + ": '" + *raw + "' is not a number");
    return 0.0;
  }
}

long Reader::integer(const std::string& section, const std::string& key,
                     long fallback) {
  const auto raw = consume(section, key);
  if (!raw) {
    note(section, key, std::to_string(fallback), true);
    return fallback;
  }
  const std::string t = trim(*raw);
  long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    errors_.push_back(section + "." + key + ": '" + *raw +
                      "' is not an integer");
    return fallback;
  }
  note(section, key, t, false);
  return v;
}

bool Reader::flag(const std::string& section, const std::string& key,
                  bool fallback) {
  const auto raw = consume(section, key);
  if (!raw) {
    note(section, key, fallback ? "true" : "false", true);
    return fallback;
  }
  const std::string t = lower(trim(*raw));
  if (t == "1" || t == "true" || t == "yes" || t == "on") {
    note(section, key, "true", false);
    return true;
  }
  if (t == "0" || t == "false" || t == "no" || t == "off") {
    note(section, key, "false", false);
    return false;
  }
  errors_.push_back(section + "." + key + ": '" + *raw + "' is not a boolean");
  return fallback;
}

std::string Reader::text(const std::string& section, const std::string& key,
                         const std::string& fallback) {
  const auto raw = consume(section, key);
  if (!raw) {
    note(section, key, fallback.empty() ? "(empty)" : fallback, true);
    return fallback;
  }
  note(section, key, *raw, false);
  return *raw;
}

std::optional<std::string> Reader::optional_text(const std::string& section,
                                                 const std::string& key) {
  const auto raw = consume(section, key);
  if (raw) note(section, key, *raw, false);
  return raw;
}

void Reader::finish() {
  std::vector<std::string> problems = errors_;
  // Anything present in the document but never consumed is probably a typo.
  for (const std::string& section : ini_.section_names()) {
    const auto consumed = consumed_.find(section);
    for (const std::string& key : ini_.keys(section)) {
      const bool seen =
          consumed != consumed_.end() &&
          std::find(consumed->second.begin(), consumed->second.end(), key) !=
              consumed->second.end();
      if (!seen)
        problems.push_back("unknown key '" +
                           (section.empty() ? key : section + "." + key) + "'");
    }
  }
  if (problems.empty()) return;
  std::string joined = "configuration is invalid:";
  for (const auto& p : problems) joined += "\n  - " + p;
  throw ConfigError(joined);
}

std::vector<std::array<double, 2>> read_profile_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read profile table " + path);
  std::vector<std::array<double, 2>> rows;
  std::string line;
  int line_no = 0;
  std::vector<std::string> problems;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    double a = 0.0, b = 0.0;
    std::string excess;
    if (!(fields >> a >> b) || (fields >> excess)) {
      problems.push_back("line " + std::to_string(line_no) +
                         ": expected two numbers, got '" + t + "'");
      continue;
    }
    rows.push_back({a, b});
  }
  if (!problems.empty()) {
    std::string joined = "profile table " + path + " is malformed:";
    for (const auto& p : problems) joined += "\n  - " + p;
    throw ConfigError(joined);
  }
  if (rows.empty())
    throw ConfigError("profile table " + path + " contains no samples");
  return rows;
}

}  // namespace annulus::config

