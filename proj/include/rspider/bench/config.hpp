#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rspider::bench {

/// One experiment file: `[section]` headers followed by `key = value` lines.
/// `#` and `;` start comments. Values holding comma-separated lists define
/// tuning grids. Section and key order are preserved.
class RunConfig {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;
  struct Section {
    std::string name;
    Entries entries;
    bool operator==(const Section&) const = default;
  };

  static RunConfig parse(std::istream& in);
  static RunConfig parse_text(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  /// Sets (or replaces) a value, creating the section if needed.
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<std::string> get_list(const std::string& section,
                                    const std::string& key) const;

  const std::vector<Section>& sections() const { return sections_; }
  const Section* section(const std::string& name) const;

  // [run] conveniences.
  std::vector<std::uint64_t> seeds() const;
  std::vector<std::string> optimizers() const;
  /// Budget in IFO calls; "<x>n" is x times the problem size.
  std::uint64_t budget(std::size_t n) const;
  std::string out_dir() const;

  /// Throws ConfigError unless there is at least one seed and a positive
  /// budget.
  void validate() const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::vector<Section> sections_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Splits "a, b, c" into trimmed items.
std::vector<std::string> split_list(const std::string& value);

}  // namespace rspider::bench
