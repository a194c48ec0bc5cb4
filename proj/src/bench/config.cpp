#include "rspider/bench/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rspider::bench {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  std::string current;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header '" + line + "'");
      }
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!cfg.section(current)) cfg.sections_.push_back({current, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside of any [section]");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    cfg.set(current, key, trim(std::string_view(line).substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in);
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const Section& s : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << s.name << "]\n";
    for (const auto& [key, value] : s.entries) {
      out << key << " = " << value << '\n';
    }
  }
  return out.str();
}

const RunConfig::Section* RunConfig::section(const std::string& name) const {
  for (const Section& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

std::optional<std::string> RunConfig::get(const std::string& section,
                                          const std::string& key) const {
  const Section* s = this->section(section);
  if (!s) return std::nullopt;
  for (const auto& [k, v] : s->entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string RunConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const Section& s) { return s.name == section; });
  if (it == sections_.end()) {
    sections_.push_back({section, {}});
    it = std::prev(sections_.end());
  }
  for (auto& [k, v] : it->entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  it->entries.emplace_back(key, value);
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const auto v = get(section, key);
  return v ? parse_double(*v, section + "." + key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& section,
                                const std::string& key,
                                std::int64_t fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::int64_t out = 0;
  const char* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(section + "." + key + ": expected an integer, got '" +
                      *v + "'");
  }
  return out;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(section + "." + key + ": expected a boolean, got '" + *v + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& section,
                                             const std::string& key) const {
  const auto v = get(section, key);
  return v ? split_list(*v) : std::vector<std::string>{};
}

std::vector<std::uint64_t> RunConfig::seeds() const {
  std::vector<std::uint64_t> out;
  for (const std::string& item : get_list("run", "seeds")) {
    std::uint64_t s = 0;
    const char* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, s);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError("run.seeds: '" + item + "' is not a seed");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<std::string> RunConfig::optimizers() const {
  return get_list("run", "optimizers");
}

std::uint64_t RunConfig::budget(std::size_t n) const {
  std::string text = get_or("run", "budget", "");
  if (text.empty()) throw ConfigError("run.budget is required");
  double scale = 1.0;
  if (text.back() == 'n') {
    scale = static_cast<double>(n);
    text.pop_back();
  }
  const double value = parse_double(trim(text), "run.budget") * scale;
  if (!(value > 0.0)) throw ConfigError("run.budget must be positive");
  return static_cast<std::uint64_t>(value);
}

std::string RunConfig::out_dir() const { return get_or("run", "out", "results"); }

void RunConfig::validate() const {
  if (seeds().empty()) throw ConfigError("run.seeds must list at least one seed");
  budget(1);
}

}  // namespace rspider::bench
