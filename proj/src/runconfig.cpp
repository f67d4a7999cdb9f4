#include "casimir/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ConfigError(origin + ": " + msg);
}

void reject_unknown_keys(const json& obj, const std::string& origin,
                         const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail(origin, "unknown key '" + it.key() + "' in " + where);
    }
}

double number(const json& v, const std::string& origin, const std::string& name) {
    if (!v.is_number()) fail(origin, name + " must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(origin, name + " must be finite");
    return x;
}

double positive(const json& v, const std::string& origin, const std::string& name) {
    double x = number(v, origin, name);
    if (x <= 0.0) fail(origin, name + " must be positive");
    return x;
}

std::vector<double> number_grid(const json& v, const std::string& origin,
                                const std::string& name) {
    if (!v.is_array()) fail(origin, name + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(number(e, origin, name + " entry"));
    if (out.empty()) fail(origin, name + " must not be empty");
    if (std::adjacent_find(out.begin(), out.end(),
                           [](double a, double b) { return a >= b; }) != out.end())
        fail(origin, name + " must be strictly increasing");
    return out;
}

MaterialFile load_material(const json& mats, const char* role, const std::string& origin,
                           const std::filesystem::path& base) {
    if (!mats.contains(role)) fail(origin, std::string("materials.") + role + " is required");
    if (!mats[role].is_string())
        fail(origin, std::string("materials.") + role + " must be a file path string");
    std::filesystem::path p = mats[role].get<std::string>();
    if (p.is_relative()) p = base / p;
    try {
        return load_material_file(p.string());
    } catch (const ConfigError& e) {
        fail(origin, std::string("materials.") + role + ": " + e.what());
    }
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");

    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        fail(path, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(path, "top level must be a JSON object");

    reject_unknown_keys(root, path, "config",
                        {"geometry", "materials", "temperatures_K", "tolerances",
                         "output_format", "strict", "oscillator", "open_gap_nm"});

    RunConfig cfg;

    if (!root.contains("geometry") || !root["geometry"].is_object())
        fail(path, "geometry block is required");
    const json& geo = root["geometry"];
    reject_unknown_keys(geo, path, "geometry",
                        {"h_nm", "c_nm", "b_nm", "delta_nm", "delta_grid_nm", "b_grid_nm"});

    if (!geo.contains("b_nm")) fail(path, "geometry.b_nm is required");
    cfg.b = positive(geo["b_nm"], path, "geometry.b_nm") * 1e-9;

    if (geo.contains("h_nm") == geo.contains("c_nm"))
        fail(path, "geometry needs exactly one of h_nm or c_nm");
    if (geo.contains("h_nm")) {
        cfg.h = positive(geo["h_nm"], path, "geometry.h_nm") * 1e-9;
    } else {
        double c = positive(geo["c_nm"], path, "geometry.c_nm") * 1e-9;
        if (c <= cfg.b) fail(path, "geometry.c_nm must exceed b_nm");
        cfg.h = c - cfg.b;
    }

    if (geo.contains("delta_nm") == geo.contains("delta_grid_nm"))
        fail(path, "geometry needs exactly one of delta_nm or delta_grid_nm");
    if (geo.contains("delta_nm")) {
        cfg.delta_grid = {number(geo["delta_nm"], path, "geometry.delta_nm") * 1e-9};
    } else {
        cfg.delta_grid = number_grid(geo["delta_grid_nm"], path, "geometry.delta_grid_nm");
        for (double& d : cfg.delta_grid) d *= 1e-9;
    }
    for (double d : cfg.delta_grid) {
        if (std::abs(d) >= cfg.h / 2.0)
            fail(path, "every delta must satisfy |delta| < h/2");
    }

    if (geo.contains("b_grid_nm")) {
        cfg.b_grid = number_grid(geo["b_grid_nm"], path, "geometry.b_grid_nm");
        for (double& b : cfg.b_grid) {
            b *= 1e-9;
            if (b <= 0.0) fail(path, "geometry.b_grid_nm entries must be positive");
        }
    }

    if (!root.contains("materials") || !root["materials"].is_object())
        fail(path, "materials block is required");
    const json& mats = root["materials"];
    reject_unknown_keys(mats, path, "materials", {"wall", "slab", "gap"});
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    cfg.wall = load_material(mats, "wall", path, base);
    cfg.slab = load_material(mats, "slab", path, base);
    cfg.gap = load_material(mats, "gap", path, base);

    if (!root.contains("temperatures_K"))
        fail(path, "temperatures_K is required");
    cfg.temperatures = number_grid(root["temperatures_K"], path, "temperatures_K");
    for (double T : cfg.temperatures) {
        if (T < 0.0) fail(path, "temperatures_K entries must be >= 0");
    }
    if (cfg.temperatures.back() > 0.0 && !std::isfinite(cfg.gap.model.eps(0.0)))
        fail(path, "gap material must have finite static permittivity at T > 0");

    if (root.contains("tolerances")) {
        const json& tol = root["tolerances"];
        if (!tol.is_object()) fail(path, "tolerances must be an object");
        reject_unknown_keys(tol, path, "tolerances", {"rel_tol", "abs_tol"});
        if (tol.contains("rel_tol"))
            cfg.quad.rel_tol = positive(tol["rel_tol"], path, "tolerances.rel_tol");
        if (tol.contains("abs_tol"))
            cfg.quad.abs_tol = positive(tol["abs_tol"], path, "tolerances.abs_tol");
    }

    if (root.contains("output_format")) {
        if (!root["output_format"].is_string())
            fail(path, "output_format must be \"csv\" or \"json\"");
        std::string f = root["output_format"].get<std::string>();
        if (f == "csv")
            cfg.format = OutputFormat::csv;
        else if (f == "json")
            cfg.format = OutputFormat::json;
        else
            fail(path, "output_format must be \"csv\" or \"json\"");
    }

    if (root.contains("strict")) {
        if (!root["strict"].is_boolean()) fail(path, "strict must be a boolean");
        cfg.strict = root["strict"].get<bool>();
    }

    if (root.contains("oscillator")) {
        const json& osc = root["oscillator"];
        if (!osc.is_object()) fail(path, "oscillator must be an object");
        reject_unknown_keys(osc, path, "oscillator",
                            {"k_spring_N_per_m3", "m_area_kg_per_m2"});
        if (!osc.contains("k_spring_N_per_m3") || !osc.contains("m_area_kg_per_m2"))
            fail(path, "oscillator needs k_spring_N_per_m3 and m_area_kg_per_m2");
        cfg.k_spring = positive(osc["k_spring_N_per_m3"], path, "oscillator.k_spring_N_per_m3");
        cfg.m_area = positive(osc["m_area_kg_per_m2"], path, "oscillator.m_area_kg_per_m2");
        cfg.has_oscillator = true;
    }

    cfg.open_gap = cfg.h / 2.0;
    if (root.contains("open_gap_nm"))
        cfg.open_gap = positive(root["open_gap_nm"], path, "open_gap_nm") * 1e-9;

    return cfg;
}

}  // namespace casimir
