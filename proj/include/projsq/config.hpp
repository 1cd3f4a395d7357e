#pragma once

#include <map>
#include <string>
#include <vector>

namespace projsq {

// Flat scenario configuration: one `key = value` per line, `#` comments.
using ConfigMap = std::map<std::string, std::string>;

// Parses config text. Blank lines and comments are skipped, a `#` starts a
// comment anywhere in the line, later duplicates overwrite earlier ones.
// Non-blank lines without `=` are rejected.
ConfigMap parse_config(const std::string& text);

// Reads and parses a config file; throws InvalidArgument when unreadable.
ConfigMap load_config(const std::string& path);

// Typed lookups. Missing keys return the fallback; malformed values throw.
std::string get_string(const ConfigMap& m, const std::string& key,
                       const std::string& fallback);
double get_double(const ConfigMap& m, const std::string& key, double fallback);
int get_int(const ConfigMap& m, const std::string& key, int fallback);
unsigned long long get_seed(const ConfigMap& m, const std::string& key,
                            unsigned long long fallback);

// Comma-separated list of reals; fallback_csv is parsed the same way when
// the key is absent.
std::vector<double> get_grid(const ConfigMap& m, const std::string& key,
                             const std::string& fallback_csv);

}  // namespace projsq
