#include "nldiff/config.hpp"
#include "nldiff/io.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace nldiff {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
            flatten_json(it.value(), key, out);
        }
    } else if (j.is_array()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",";
            os << j[i].dump();
        }
        out[prefix] = os.str();
    } else if (j.is_string()) {
        out[prefix] = j.get<std::string>();
    } else {
        out[prefix] = j.dump();
    }
}

} // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
    KeyValueConfig cfg;
    // JSON alternative input
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j = nlohmann::json::parse(text, nullptr, true, true);
        flatten_json(j, "", cfg.entries_);
        return cfg;
    }
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (cfg.entries_.count(key))
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        cfg.entries_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_number(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not a number: '" + s + "'");
    }
}

double KeyValueConfig::get_number(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const double v = get_number(key);
    const auto i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': expected an integer");
    return i;
}

std::vector<double> KeyValueConfig::get_number_list(const std::string& key) const {
    const std::string s = get_string(key);
    std::vector<double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("config key '" + key + "': bad list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

void KeyValueConfig::reject_unknown(const std::vector<std::string>& known_prefixes) const {
    for (const auto& [key, value] : entries_) {
        bool ok = false;
        for (const auto& p : known_prefixes) {
            if (key == p || key.rfind(p + ".", 0) == 0) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            auto it = lines_.find(key);
            const std::string where =
                it == lines_.end() ? "" : " (line " + std::to_string(it->second) + ")";
            throw ConfigError("unknown config key '" + key + "'" + where);
        }
    }
}

namespace {

OperatorSpec operator_from_config_impl(const KeyValueConfig& cfg,
                                       const std::string& prefix, const Grid* grid) {
    auto key = [&](const std::string& k) { return prefix.empty() ? k : prefix + "." + k; };
    const std::string kind = cfg.get_string(key("kind"));
    if (kind == "fractional_laplacian")
        return OperatorSpec::fractional_laplacian(cfg.get_number(key("alpha")));
    if (kind == "laplacian") return OperatorSpec::laplacian();
    if (kind == "anisotropic_fractional_sum")
        return OperatorSpec::anisotropic_fractional_sum(
            cfg.get_number_list(key("alphas")));
    if (kind == "relativistic_schrodinger")
        return OperatorSpec::relativistic_schrodinger(cfg.get_number(key("alpha")),
                                                      cfg.get_number(key("kappa")));
    if (kind == "bessel_resolvent")
        return OperatorSpec::bessel_resolvent(cfg.get_number(key("alpha")));
    if (kind == "geometric_stable")
        return OperatorSpec::geometric_stable(cfg.get_number(key("alpha")));
    if (kind == "identity") return OperatorSpec::identity();
    if (kind == "shifted")
        return OperatorSpec::shifted(cfg.get_number(key("shift_c")),
                                     operator_from_config_impl(cfg, key("base"), grid));
    if (kind == "sum")
        return OperatorSpec::sum(operator_from_config_impl(cfg, key("left"), grid),
                                 operator_from_config_impl(cfg, key("right"), grid));
    if (kind == "convolution_zero_order") {
        if (!grid)
            throw ConfigError("convolution_zero_order needs a grid to realize its kernel");
        const std::string spec = cfg.get_string(key("kernel"), "gaussian");
        Field J(*grid);
        if (spec.rfind("file:", 0) == 0) {
            J = read_field_csv(*grid, spec.substr(5));
            const double mass = integral(J);
            if (mass <= 0.0) throw ConfigError("0-order kernel file has no mass");
            for (auto& v : J.values()) v /= mass;
        } else {
            J = builtin_kernel(*grid, spec, cfg.get_number(key("width"), 0.5));
        }
        return OperatorSpec::convolution_zero_order(std::move(J));
    }
    throw ConfigError("unknown operator kind: '" + kind + "'");
}

} // namespace

OperatorSpec operator_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                  const Grid& grid) {
    return operator_from_config_impl(cfg, prefix, &grid);
}

OperatorSpec operator_from_config(const KeyValueConfig& cfg, const std::string& prefix) {
    return operator_from_config_impl(cfg, prefix, nullptr);
}

Grid grid_from_string(const std::string& text) {
    std::size_t n = 0;
    double L = 0.0;
    int dim = 1;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("grid spec: expected k=v entries, got '" + item + "'");
        const std::string k = trim(item.substr(0, eq));
        const std::string v = trim(item.substr(eq + 1));
        if (k == "n") n = static_cast<std::size_t>(std::stoul(v));
        else if (k == "L") L = std::stod(v);
        else if (k == "dim") dim = std::stoi(v);
        else throw ConfigError("grid spec: unknown key '" + k + "'");
    }
    return Grid(dim, n, L);
}

} // namespace nldiff
