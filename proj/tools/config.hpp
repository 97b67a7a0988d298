#pragma once

// Sectioned key=value experiment configuration for the CLI. Sections: model,
// control, sim, grid, terrain. Values stay strings until queried.

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        Config config;
        std::string line;
        std::string section = "";
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto begin = line.find_first_not_of(" \t\r");
            if (begin == std::string::npos) continue;
            const auto end = line.find_last_not_of(" \t\r");
            line = line.substr(begin, end - begin + 1);
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                             ": malformed section header");
                section = line.substr(1, line.size() - 2);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": expected key=value");
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            const auto key_end = key.find_last_not_of(" \t");
            key = key.substr(0, key_end + 1);
            const auto val_begin = value.find_first_not_of(" \t");
            value = val_begin == std::string::npos ? "" : value.substr(val_begin);
            config.values_[section + "." + key] = value;
        }
        return config;
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto it = values_.find(section + "." + key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        return parse_double(it->second, section + "." + key);
    }

    long get_long(const std::string& section, const std::string& key, long fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        return std::stol(it->second);
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        return it->second == "1" || it->second == "true" || it->second == "yes";
    }

    // Lists accept "a,b,c" or inclusive ranges "start:stop:step".
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const {
        const auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        return parse_list(it->second, section + "." + key);
    }

    static std::vector<double> parse_list(const std::string& text, const std::string& where) {
        std::vector<double> out;
        if (text.find(':') != std::string::npos) {
            double start, stop, step;
            char c1, c2;
            std::istringstream ss(text);
            if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
                step <= 0)
                throw std::runtime_error("bad range for " + where + ": " + text);
            for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
            return out;
        }
        std::istringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(parse_double(item, where));
        if (out.empty()) throw std::runtime_error("empty list for " + where);
        return out;
    }

private:
    static double parse_double(const std::string& text, const std::string& where) {
        std::istringstream ss(text);
        double v;
        if (!(ss >> v)) throw std::runtime_error("bad number for " + where + ": " + text);
        return v;
    }

    std::map<std::string, std::string> values_;
};

} // namespace cli
