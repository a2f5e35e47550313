#include "safdim/io.hpp"

#include "safdim/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace safdim {

namespace {

using nlohmann::ordered_json;

Number number_from_json(const ordered_json& j, const std::string& where,
                        std::vector<std::string>& bad) {
    try {
        if (j.is_string()) return Number::from_text(j.get<std::string>());
        if (j.is_number()) return Number::from_text(j.dump());
    } catch (const std::invalid_argument& e) {
        bad.push_back(where + ": " + e.what());
        return {};
    }
    bad.push_back(where + ": expected a decimal string, got " + j.dump());
    return {};
}

}  // namespace

AffineIFS parse_system(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(e.byte, e.what());
    }

    std::vector<std::string> bad;
    AffineIFS system;
    if (!doc.is_object()) {
        bad.push_back("top level must be an object");
        throw ValidationError(std::move(bad));
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "label" && it.key() != "maps")
            bad.push_back("unknown key \"" + it.key() + "\"");
    }
    if (doc.contains("label")) {
        if (doc["label"].is_string())
            system.label = doc["label"].get<std::string>();
        else
            bad.push_back("\"label\" must be a string");
    }
    if (!doc.contains("maps") || !doc["maps"].is_array()) {
        bad.push_back("missing \"maps\" array");
        throw ValidationError(std::move(bad));
    }

    int idx = 0;
    for (const auto& jm : doc["maps"]) {
        ++idx;
        std::string where = "map " + std::to_string(idx);
        if (!jm.is_object()) {
            bad.push_back(where + ": must be an object {c,b,d,u,v}");
            continue;
        }
        TriangularMap m;
        for (const char* key : {"c", "b", "d", "u", "v"}) {
            if (!jm.contains(key)) {
                bad.push_back(where + ": missing field \"" + key + "\"");
                continue;
            }
            Number n = number_from_json(jm[key], where + " field \"" + key + "\"", bad);
            if (key[0] == 'c') m.c = n;
            else if (key[0] == 'b') m.b = n;
            else if (key[0] == 'd') m.d = n;
            else if (key[0] == 'u') m.u = n;
            else m.v = n;
        }
        for (auto it = jm.begin(); it != jm.end(); ++it) {
            std::string k = it.key();
            if (k != "c" && k != "b" && k != "d" && k != "u" && k != "v")
                bad.push_back(where + ": unknown key \"" + k + "\"");
        }
        system.maps.push_back(m);
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));

    auto violations = system.validate();
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return system;
}

AffineIFS load_system_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({"cannot open system file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

std::string serialize_system(const AffineIFS& system) {
    ordered_json doc;
    if (!system.label.empty()) doc["label"] = system.label;
    doc["maps"] = ordered_json::array();
    for (const auto& m : system.maps) {
        ordered_json jm;
        jm["c"] = m.c.text();
        jm["b"] = m.b.text();
        jm["d"] = m.d.text();
        jm["u"] = m.u.text();
        jm["v"] = m.v.text();
        doc["maps"].push_back(jm);
    }
    return doc.dump(2) + "\n";
}

void save_system_file(const AffineIFS& system, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError({"cannot write system file: " + path});
    out << serialize_system(system);
}

}  // namespace safdim
