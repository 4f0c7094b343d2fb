#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mkg::cli {

enum class KeyType { integer, real, boolean, text };

struct KeySpec {
  std::string key;  // "section.name"
  KeyType type;
  std::string default_value;
  std::string help;
};

const std::vector<KeySpec>& config_keys();

// Flat "section.name" -> value map over the fixed key set. Files use
//   [section]
//   name = value
// and reals accept pi, pi/2, -pi/2 besides plain numbers.
class RunConfig {
 public:
  RunConfig();

  void load_file(const std::string& path);
  // "section.name=value"
  void assign(const std::string& assignment);
  void set(const std::string& key, const std::string& value);
  // Type and range checks of every key.
  void validate() const;

  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;

  nlohmann::json to_json() const;

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& s);

}  // namespace mkg::cli
