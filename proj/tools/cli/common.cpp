// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "common.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cli {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("io", kExitIo, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw CliError("io", kExitIo, "failed reading " + path);
    return ss.str();
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError("io", kExitIo, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CliError("io", kExitIo, "failed writing " + path);
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema_error(what + ": " + e.what());
    }
}

namespace {

const Json& field(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) schema_error(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(where + ": missing field '" + key + "'");
    return *it;
}

}  // namespace

std::uint64_t get_count(const Json& obj, const char* key, const std::string& where) {
    const Json& v = field(obj, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        schema_error(where + ": field '" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

double get_number(const Json& obj, const char* key, const std::string& where) {
    const Json& v = field(obj, key, where);
    if (!v.is_number()) schema_error(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
    const Json& v = field(obj, key, where);
    if (!v.is_string()) schema_error(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

namespace {

void render_into(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& lines) {
    if (v.is_object() && !v.empty()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            render_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), lines);
        }
        return;
    }
    if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) render_into(v[i], prefix + "[" + std::to_string(i) + "]", lines);
        return;
    }
    lines.emplace_back(prefix, v.is_string() ? v.get<std::string>() : v.dump());
}

}  // namespace

std::string render_text(const Json& body) {
    std::vector<std::pair<std::string, std::string>> lines;
    render_into(body, "", lines);
    std::size_t width = 0;
    for (const auto& [k, _] : lines) width = std::max(width, k.size());
    std::string out;
    for (const auto& [k, v] : lines) {
        out += k;
        out.append(width - k.size() + 2, ' ');
        out += v;
        out += '\n';
    }
    return out;
}

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string& s = c < cells.size() ? cells[c] : std::string();
            if (c != 0) out += "  ";
            out.append(width[c] - s.size(), ' ');
            out += s;
        }
        return out + "\n";
    };
    std::string out = line(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    out.append(total + 2 * (width.size() - 1), '-');
    out += '\n';
    for (const auto& r : rows) out += line(r);
    return out;
}

}  // namespace cli
