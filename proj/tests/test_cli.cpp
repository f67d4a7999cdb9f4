#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/material_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string require_env(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, "environment variable ", name, " must be set");
    return v;
}

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path p =
            fs::temp_directory_path() / ("casimir-cli-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Drives the installed binary through the shell; stdout/stderr captured via
// redirection because the exit code is part of the contract under test.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string cli = require_env("CASIMIR_CLI");
    const fs::path out = scratch_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = scratch_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string cmd =
        "'" + cli + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path material_path(const std::string& name) {
    return fs::path(require_env("CASIMIR_DATA")) / "materials" / (name + ".mat");
}

json proxy_materials() {
    return {{"wall", material_path("ideal_conductor").string()},
            {"slab", material_path("ideal_conductor").string()},
            {"gap", material_path("vacuum").string()}};
}

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << doc.dump(2) << "\n";
    return p;
}

// h = 2.5 um cavity with the conductor proxy; cheap enough that every
// subcommand finishes in well under a second.
json proxy_sweep_config() {
    return {{"geometry",
             {{"h_nm", 2500.0},
              {"b_nm", 1000.0},
              {"delta_grid_nm", json::array({-300.0, 0.0, 300.0})}}},
            {"materials", proxy_materials()},
            {"temperatures_K", json::array({0.0})}};
}

struct CsvDoc {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// Parser for the tool's own output: `# key = value` preamble, one header
// line, then unquoted numeric fields (nothing in these tests emits quotes).
CsvDoc parse_csv(const std::string& text) {
    CsvDoc doc;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            REQUIRE(eq != std::string::npos);
            doc.meta[line.substr(2, eq - 2)] = line.substr(eq + 3);
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!header_seen) {
            doc.columns = fields;
            header_seen = true;
        } else {
            REQUIRE(fields.size() == doc.columns.size());
            doc.rows.push_back(fields);
        }
    }
    return doc;
}

int column_index(const CsvDoc& doc, const std::string& name) {
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        if (doc.columns[i] == name) return static_cast<int>(i);
    FAIL("missing column ", name);
    return -1;
}

std::string cell(const CsvDoc& doc, int row, const std::string& name) {
    return doc.rows.at(row).at(column_index(doc, name));
}

}  // namespace

TEST_CASE("force-sweep emits metadata, digests, and antisymmetric pressures") {
    const fs::path cfg = write_config("sweep.json", proxy_sweep_config());
    const RunResult r = run_cli("force-sweep --config '" + cfg.string() + "'");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const CsvDoc doc = parse_csv(r.out);
    CHECK(doc.meta.at("tool") == "casimir-cavity");
    CHECK(doc.meta.at("command") == "force-sweep");
    CHECK(doc.meta.at("wall_material") == "ideal_conductor");
    CHECK(doc.meta.at("gap_material") == "vacuum");
    CHECK(doc.meta.count("sign_convention") == 1);

    // digests in the preamble must match the loader's own hash of the files
    const casimir::MaterialFile wall =
        casimir::load_material_file(material_path("ideal_conductor").string());
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, wall.digest);
    CHECK(doc.meta.at("wall_digest") == buf);
    CHECK(doc.meta.at("slab_digest") == buf);

    REQUIRE(doc.rows.size() == 3);
    for (const auto& row : doc.rows)
        CHECK(row.at(column_index(doc, "status")) == "ok");

    // bit-exact antisymmetry: the minus row is the negated plus row
    const double minus = std::stod(cell(doc, 0, "pressure_N_per_m2"));
    const double zero = std::stod(cell(doc, 1, "pressure_N_per_m2"));
    const double plus = std::stod(cell(doc, 2, "pressure_N_per_m2"));
    CHECK(zero == 0.0);
    CHECK(minus == -plus);
    CHECK(plus > 0.0);

    // the eps = 1e8 proxy sits within half a percent of the ideal limit
    const double ratio = std::stod(cell(doc, 2, "ratio_to_ideal"));
    CHECK(std::abs(ratio - 1.0) < 5e-3);
}

TEST_CASE("output bytes do not depend on the worker count") {
    const fs::path cfg = write_config("sweep_workers.json", proxy_sweep_config());
    const fs::path out1 = scratch_dir() / "w1.csv";
    const fs::path out2 = scratch_dir() / "w2.csv";
    const RunResult r1 = run_cli("force-sweep --config '" + cfg.string() +
                                 "' --workers 1 --out '" + out1.string() + "'");
    const RunResult r2 = run_cli("force-sweep --config '" + cfg.string() +
                                 "' --workers 2 --out '" + out2.string() + "'");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    const std::string b1 = slurp(out1);
    REQUIRE(!b1.empty());
    CHECK(b1 == slurp(out2));
}

TEST_CASE("json format carries the same rows as csv") {
    const fs::path cfg = write_config("sweep_json.json", proxy_sweep_config());
    const RunResult r =
        run_cli("force-sweep --config '" + cfg.string() + "' --format json");
    REQUIRE(r.exit_code == 0);

    const json doc = json::parse(r.out);
    CHECK(doc.at("meta").at("command") == "force-sweep");
    const auto& rows = doc.at("rows");
    REQUIRE(rows.size() == 3);
    const double minus = rows[0].at("pressure_N_per_m2").get<double>();
    const double plus = rows[2].at("pressure_N_per_m2").get<double>();
    CHECK(minus == -plus);
    CHECK(rows[1].at("pressure_N_per_m2").get<double>() == 0.0);
    for (const auto& row : rows) CHECK(row.at("status") == "ok");
}

TEST_CASE("taylor reports a1 close to ideal with a consistent fd probe") {
    json cfg_doc = proxy_sweep_config();
    cfg_doc["geometry"]["delta_grid_nm"] = json::array({100.0});
    const fs::path cfg = write_config("taylor.json", cfg_doc);
    const RunResult r = run_cli("taylor --config '" + cfg.string() + "'");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const CsvDoc doc = parse_csv(r.out);
    REQUIRE(doc.rows.size() == 1);
    CHECK(cell(doc, 0, "status") == "ok");
    const double a1 = std::stod(cell(doc, 0, "a1_N_per_m3"));
    const double ideal = std::stod(cell(doc, 0, "a1_ideal_N_per_m3"));
    CHECK(std::abs(a1 / ideal - 1.0) < 5e-3);
    CHECK(std::stod(cell(doc, 0, "fd_rel_dev")) < 1e-6);
}

TEST_CASE("config errors are line-precise and exit 1") {
    SUBCASE("missing file") {
        const RunResult r = run_cli("force-sweep --config /nonexistent/run.json");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("error:") != std::string::npos);
    }
    SUBCASE("unknown geometry key") {
        json doc = proxy_sweep_config();
        doc["geometry"]["bogus_nm"] = 1.0;
        const fs::path cfg = write_config("bogus.json", doc);
        const RunResult r = run_cli("force-sweep --config '" + cfg.string() + "'");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("unknown key") != std::string::npos);
        CHECK(r.err.find("bogus_nm") != std::string::npos);
    }
    SUBCASE("delta outside the cavity") {
        json doc = proxy_sweep_config();
        doc["geometry"]["delta_grid_nm"] = json::array({1300.0});
        const fs::path cfg = write_config("wide.json", doc);
        const RunResult r = run_cli("force-sweep --config '" + cfg.string() + "'");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("delta") != std::string::npos);
    }
}

TEST_CASE("validate passes clean and exits 2 under the injected sign flip") {
    json doc = proxy_sweep_config();
    doc["geometry"]["delta_grid_nm"] = json::array({100.0});
    const fs::path cfg = write_config("validate.json", doc);

    SUBCASE("clean run") {
        const RunResult r = run_cli("validate --config '" + cfg.string() + "' --draws 5");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("[FAIL]") == std::string::npos);
        CHECK(r.out.find("stress_cancellation_check") != std::string::npos);
        CHECK(r.out.find("validation passed") != std::string::npos);
    }
    SUBCASE("sign flip trips only the stress certificate") {
        const RunResult r = run_cli("validate --config '" + cfg.string() +
                                    "' --draws 5 --inject-delta-sign-flip");
        CHECK(r.exit_code == 2);
        std::size_t fails = 0;
        std::istringstream in(r.out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("[FAIL]", 0) != 0) continue;
            ++fails;
            CHECK(line.find("stress_cancellation_check") != std::string::npos);
        }
        CHECK(fails == 1);
    }
}

TEST_CASE("strict mode exits 3 when a row cannot converge") {
    json doc = proxy_sweep_config();
    doc["geometry"]["delta_grid_nm"] = json::array({300.0});
    doc["strict"] = true;
    const fs::path cfg = write_config("strict.json", doc);
    // tolerance far beyond double precision: the quadrature must give up,
    // the row records the failure, strict turns that into exit 3
    const RunResult r = run_cli("force-sweep --config '" + cfg.string() +
                                "' --tolerance-scale 1e-12");
    CHECK(r.exit_code == 3);
    const CsvDoc out = parse_csv(r.out);
    REQUIRE(out.rows.size() == 1);
    CHECK(cell(out, 0, "status").find("convergence_error") != std::string::npos);
    // partial value survives alongside the failure marker
    CHECK(std::stod(cell(out, 0, "pressure_N_per_m2")) != 0.0);
}
