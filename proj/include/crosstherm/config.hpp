// config.hpp
//
// Minimal structured text configuration: key/value pairs grouped into
// nested sections addressed by dotted paths.
//
//   # comment
//   [crossbar]
//   rows = 3
//   [crossbar.materials.cf]
//   sigma = 7e3
//
// The in-memory form preserves insertion order so that
// parse -> serialize -> parse is a fixed point.

#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crosstherm/errors.hpp"
#include "crosstherm/units.hpp"

namespace crosstherm {

class Config {
public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        auto& sec = section_for(section);
        for (auto& kv : sec.entries)
            if (kv.first == key) { kv.second = value; return; }
        sec.entries.emplace_back(key, value);
    }

    bool has(const std::string& section, const std::string& key) const {
        const Section* sec = find(section);
        if (!sec) return false;
        for (const auto& kv : sec->entries)
            if (kv.first == key) return true;
        return false;
    }

    bool has_section(const std::string& section) const { return find(section) != nullptr; }

    std::string get(const std::string& section, const std::string& key) const {
        const Section* sec = find(section);
        if (sec)
            for (const auto& kv : sec->entries)
                if (kv.first == key) return kv.second;
        throw ConfigError("missing config key [" + section + "] " + key);
    }

    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        return has(section, key) ? get(section, key) : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        const std::string v = get(section, key);
        char* end = nullptr;
        double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str()) throw ConfigError("not a number: [" + section + "] " + key + " = " + v);
        return x;
    }

    double get_double_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? get_double(section, key) : fallback;
    }

    long get_int(const std::string& section, const std::string& key) const {
        return static_cast<long>(get_double(section, key));
    }

    long get_int_or(const std::string& section, const std::string& key, long fallback) const {
        return has(section, key) ? get_int(section, key) : fallback;
    }

    double get_length(const std::string& section, const std::string& key) const {
        return parse_length(get(section, key));
    }

    double get_length_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? parse_length(get(section, key)) : fallback;
    }

    static Config parse(const std::string& text) {
        Config cfg;
        std::string current;  // root section ""
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
                current = trim(t.substr(1, t.size() - 2));
                cfg.section_for(current);
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
            cfg.set(current, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        }
        return cfg;
    }

    std::string serialize() const {
        std::ostringstream out;
        for (const auto& sec : sections_) {
            if (!sec.name.empty()) out << "[" << sec.name << "]\n";
            for (const auto& kv : sec.entries) out << kv.first << " = " << kv.second << "\n";
            out << "\n";
        }
        std::string s = out.str();
        while (!s.empty() && s.back() == '\n') s.pop_back();
        s += "\n";
        return s;
    }

    bool operator==(const Config& other) const {
        if (sections_.size() != other.sections_.size()) return false;
        for (size_t i = 0; i < sections_.size(); ++i) {
            if (sections_[i].name != other.sections_[i].name) return false;
            if (sections_[i].entries != other.sections_[i].entries) return false;
        }
        return true;
    }

    std::vector<std::string> section_names() const {
        std::vector<std::string> names;
        for (const auto& s : sections_) names.push_back(s.name);
        return names;
    }

private:
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };

    Section& section_for(const std::string& name) {
        for (auto& s : sections_)
            if (s.name == name) return s;
        sections_.push_back(Section{name, {}});
        return sections_.back();
    }

    const Section* find(const std::string& name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    static std::string trim(const std::string& s) {
        size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    std::vector<Section> sections_;
};

}  // namespace crosstherm
