#include "casimir/material_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

std::uint64_t fnv1a_64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double number(const std::string& origin, int line, std::string_view text,
              const std::string& what) {
    const std::string_view t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size())
        fail(origin, line, "cannot parse " + what + " from '" + std::string(t) + "'");
    return v;
}

// The spec of the format lives in README.md; keep the two in sync.
struct ParsedFile {
    std::vector<Entry> entries;
    DispersionTable table;
    bool has_body = false;
    bool body_has_rows = false;
    int body_line = 0;
};

ParsedFile split_lines(std::string_view text, const std::string& origin) {
    ParsedFile out;
    bool in_body = false;
    bool header_seen = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                              : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (!in_body) {
            if (line == "data:") {
                in_body = true;
                out.has_body = true;
                out.body_line = line_no;
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                fail(origin, line_no, "expected 'key = value' (or 'data:'), got '" +
                                          std::string(line) + "'");
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key.empty()) fail(origin, line_no, "empty key");
            if (value.empty()) fail(origin, line_no, "empty value for key '" + std::string(key) + "'");
            out.entries.push_back({std::string(key), std::string(value), line_no});
            continue;
        }

        if (!header_seen) {
            // fixed CSV header keeps column meaning explicit in the file itself
            std::string compact;
            for (const char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
            if (compact != "zeta_rad_per_s,eps")
                fail(origin, line_no, "table body must start with 'zeta_rad_per_s,eps'");
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            fail(origin, line_no, "table rows need exactly two comma-separated columns");
        const double zeta = number(origin, line_no, line.substr(0, comma), "zeta");
        const double eps = number(origin, line_no, line.substr(comma + 1), "eps");
        if (!(zeta > 0.0)) fail(origin, line_no, "table zeta values must be positive");
        if (!(eps >= 1.0)) fail(origin, line_no, "table eps values must be >= 1");
        if (!out.table.zeta.empty() && !(zeta > out.table.zeta.back()))
            fail(origin, line_no, "table zeta values must be strictly increasing");
        out.table.zeta.push_back(zeta);
        out.table.eps.push_back(eps);
    }
    out.body_has_rows = header_seen;
    return out;
}

}  // namespace

MaterialModel parse_material(std::string_view text, const std::string& origin) {
    const ParsedFile file = split_lines(text, origin);

    const Entry* kind_entry = nullptr;
    for (const Entry& e : file.entries) {
        if (e.key != "kind") continue;
        if (kind_entry) fail(origin, e.line, "duplicate key 'kind'");
        kind_entry = &e;
    }
    if (!kind_entry) throw ConfigError(origin + ": missing required key 'kind'");
    const std::string& kind = kind_entry->value;

    const auto allowed = [&](std::initializer_list<std::string_view> keys) {
        for (const Entry& e : file.entries) {
            if (&e == kind_entry) continue;
            if (std::find(keys.begin(), keys.end(), e.key) == keys.end())
                fail(origin, e.line,
                     "key '" + e.key + "' is not valid for kind '" + kind + "'");
        }
    };
    // one scalar key, at most once
    const auto scalar = [&](std::string_view key) -> const Entry* {
        const Entry* found = nullptr;
        for (const Entry& e : file.entries) {
            if (e.key != key) continue;
            if (found) fail(origin, e.line, "duplicate key '" + e.key + "'");
            found = &e;
        }
        return found;
    };
    const auto required = [&](std::string_view key) -> const Entry& {
        const Entry* found = scalar(key);
        if (!found)
            throw ConfigError(origin + ": kind '" + kind + "' requires key '" +
                              std::string(key) + "'");
        return *found;
    };
    const auto value_of = [&](const Entry& e) {
        return number(origin, e.line, e.value, "'" + e.key + "'");
    };
    const auto mu_value = [&]() {
        const Entry* e = scalar("mu");
        return e ? value_of(*e) : 1.0;
    };
    if (file.has_body && kind != "tabulated")
        fail(origin, file.body_line, "only kind 'tabulated' takes a data body");
    if (file.has_body && !file.body_has_rows)
        fail(origin, file.body_line, "'data:' must be followed by a table");

    try {
        if (kind == "vacuum") {
            allowed({});
            return MaterialModel::vacuum();
        }
        if (kind == "drude") {
            allowed({"omega_p", "gamma", "mu"});
            return MaterialModel::drude(value_of(required("omega_p")),
                                        value_of(required("gamma")), mu_value());
        }
        if (kind == "plasma") {
            allowed({"omega_p", "mu"});
            return MaterialModel::plasma(value_of(required("omega_p")), mu_value());
        }
        if (kind == "oscillator_sum") {
            allowed({"term", "mu"});
            std::vector<OscillatorTerm> terms;
            for (const Entry& e : file.entries) {
                if (e.key != "term") continue;
                std::istringstream fields{e.value};
                std::string strength, omega, extra;
                fields >> strength >> omega;
                if (omega.empty() || (fields >> extra))
                    fail(origin, e.line, "term takes exactly two numbers: strength omega");
                terms.push_back({number(origin, e.line, strength, "term strength"),
                                 number(origin, e.line, omega, "term omega")});
            }
            return MaterialModel::oscillator_sum(std::move(terms), mu_value());
        }
        if (kind == "tabulated") {
            allowed({"mu"});
            if (!file.has_body)
                throw ConfigError(origin + ": kind 'tabulated' requires a data body");
            return MaterialModel::tabulated(file.table, mu_value());
        }
        if (kind == "ideal_conductor_proxy") {
            allowed({"eps", "mu"});
            const Entry* eps = scalar("eps");
            return MaterialModel::ideal_conductor_proxy(eps ? value_of(*eps) : 1e8,
                                                        mu_value());
        }
    } catch (const std::domain_error& e) {
        // model factories own the physical-parameter invariants
        throw ConfigError(origin + ": " + e.what());
    }
    fail(origin, kind_entry->line, "unknown kind '" + kind + "'");
}

MaterialFile load_material_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open material file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    MaterialModel model = parse_material(bytes, path);
    std::string name = std::filesystem::path(path).stem().string();
    model.set_label(name);
    return MaterialFile{std::move(model), std::move(name), path, fnv1a_64(bytes)};
}

}  // namespace casimir
