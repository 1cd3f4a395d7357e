#include "projsq/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "projsq/fock.hpp"

namespace projsq {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("config: key '" + key +
                              "' has a non-numeric value '" + value + "'");
    }
    if (used != value.size())
        throw InvalidArgument("config: key '" + key +
                              "' has trailing junk in value '" + value + "'");
    return v;
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value': '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw InvalidArgument("config: line " + std::to_string(lineno) +
                                  " has an empty key");
        out[key] = value;
    }
    return out;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string get_string(const ConfigMap& m, const std::string& key,
                       const std::string& fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

double get_double(const ConfigMap& m, const std::string& key,
                  double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : parse_double(key, it->second);
}

int get_int(const ConfigMap& m, const std::string& key, int fallback) {
    const auto it = m.find(key);
    if (it == m.end()) return fallback;
    const double v = parse_double(key, it->second);
    const int i = int(v);
    if (double(i) != v)
        throw InvalidArgument("config: key '" + key + "' is not an integer");
    return i;
}

unsigned long long get_seed(const ConfigMap& m, const std::string& key,
                            unsigned long long fallback) {
    const auto it = m.find(key);
    if (it == m.end()) return fallback;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("junk");
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("config: key '" + key +
                              "' is not an unsigned integer");
    }
}

std::vector<double> get_grid(const ConfigMap& m, const std::string& key,
                             const std::string& fallback_csv) {
    const std::string raw = get_string(m, key, fallback_csv);
    std::vector<double> out;
    std::istringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw InvalidArgument("config: key '" + key +
                                  "' has an empty grid entry");
        out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw InvalidArgument("config: key '" + key + "' resolves to an empty grid");
    return out;
}

}  // namespace projsq
