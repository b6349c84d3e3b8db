#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smb/angular_ops.hpp"
#include "smb/config.hpp"
#include "smb/errors.hpp"
#include "smb/hamiltonian.hpp"
#include "smb/lattice.hpp"
#include "smb/runner.hpp"

using namespace smb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() /
                       ("smbcli_" + std::to_string(::getpid())) / name;
    fs::create_directories(p);
    return p;
}

std::string write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

std::pair<int, std::string> run_cmd(const std::string& cmd,
                                    const std::string& cfg,
                                    const std::string& out_dir = "",
                                    double tolerance = -1.0,
                                    bool provenance = false) {
    RunOptions o;
    o.command = cmd;
    o.config_path = cfg;
    o.out_dir = out_dir;
    o.tolerance = tolerance;
    o.debug_provenance = provenance;
    std::ostringstream oss;
    const int rc = run(o, oss);
    return {rc, oss.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const char* kStripConfig = R"({
  "lattice": {"dims": [3, 2], "periodic": [false, false]},
  "truncation": {"l_max": 1, "n_max": 1, "sector": {"L": 0, "M": 0}},
  "n_omega": 3
})";

const char* kSingleLinkConfig = R"({
  "lattice": {"dims": [2, 2], "periodic": [false, false]},
  "truncation": {"l_max": 0, "n_max": 0, "sector": {"L": 0, "M": 0, "N": 0}},
  "n_omega": 31
})";

const char* kFourLinkConfig = R"({
  "lattice": {"dims": [3, 3], "periodic": [false, false]},
  "truncation": {"l_max": 1, "n_max": 1, "sector": {"L": 0, "M": 0}},
  "n_omega": 2
})";

}  // namespace

TEST_CASE("malformed configurations are rejected with the offending field") {
    const fs::path dir = scratch("reject");

    auto expect_error = [&](const std::string& name, const std::string& body,
                            const std::string& fragment) {
        const std::string cfg = write_text(dir / name, body);
        const auto [rc, log] = run_cmd("build", cfg);
        CHECK(rc == 2);
        CHECK(contains(log, "error ConfigError"));
        CHECK(contains(log, fragment));
    };

    {
        const auto [rc, log] = run_cmd("build", "");
        CHECK(rc == 2);
        CHECK(contains(log, "config file is required"));
    }
    {
        const auto [rc, log] = run_cmd("build", (dir / "missing.json").string());
        CHECK(rc == 2);
        CHECK(contains(log, "cannot open config file"));
    }
    expect_error("bad.json", "{ not json", "not valid JSON");
    expect_error("unknown.json",
                 R"({"lattice": {"dims": [2, 2]}, "bogus": 1})",
                 "unknown field config.bogus");
    expect_error("nested.json",
                 R"({"lattice": {"dims": [2, 2], "junk": true}})",
                 "unknown field lattice.junk");
    expect_error("typed.json", R"({"lattice": {"dims": "wide"}})",
                 "field lattice.dims has the wrong type");
    expect_error("nolattice.json", R"({"n_omega": 3})",
                 "missing field config.lattice");
    expect_error("mismatch.json",
                 R"({"lattice": {"dims": [2, 2], "periodic": [true]}})",
                 "lattice.periodic must match lattice.dims");
    expect_error("omega.json",
                 R"({"lattice": {"dims": [2, 2]}, "n_omega": 0})",
                 "config.n_omega must be positive");
    expect_error("stencil.json",
                 R"({"lattice": {"dims": [2, 2]}, "stencil": "sixth"})",
                 "stencil must be second or fourth");
    expect_error("coupling.json",
                 R"({"lattice": {"dims": [2, 2]}, "g": -1.0})",
                 "config.g must be positive");

    const std::string good = write_text(dir / "good.json", kSingleLinkConfig);
    const auto [rc, log] = run_cmd("transmogrify", good);
    CHECK(rc == 2);
    CHECK(contains(log, "unknown command"));
}

TEST_CASE("configs round trip through canonical rendering") {
    const fs::path dir = scratch("roundtrip");

    RunConfig c;
    c.lattice.dims = {3, 2};
    c.lattice.periodic = {true, false};
    c.tree_links = std::vector<int>{0, 2, 4, 5, 6};
    c.roles = RodRoles{2, 1};
    c.truncation.l_max = 2;
    c.truncation.n_max = 1;
    c.truncation.sector = Sector{1, -1, 0};
    c.pin_sector = false;
    c.n_omega = 7;
    c.stencil = StencilOrder::Fourth;
    c.g = 1.25;
    c.a = 0.75;
    c.tolerance = 1e-9;
    c.threads = 2;
    c.out_dir = "artifacts";
    c.debug_provenance = true;

    const std::string text = render_config(c);
    const std::string path = write_text(dir / "render.json", text);
    const RunConfig back = load_config(path);

    CHECK(back.lattice.dims == c.lattice.dims);
    CHECK(back.lattice.periodic == c.lattice.periodic);
    REQUIRE(back.tree_links.has_value());
    CHECK(*back.tree_links == *c.tree_links);
    CHECK(back.roles.rod1_link == 2);
    CHECK(back.roles.rod2_link == 1);
    CHECK(back.truncation.l_max == 2);
    CHECK(back.truncation.n_max == 1);
    CHECK(back.truncation.sector.L == 1);
    CHECK(back.truncation.sector.M == -1);
    REQUIRE(back.truncation.sector.N.has_value());
    CHECK(*back.truncation.sector.N == 0);
    CHECK(back.pin_sector == false);
    CHECK(back.n_omega == 7);
    CHECK(back.stencil == StencilOrder::Fourth);
    CHECK(back.g == 1.25);
    CHECK(back.a == 0.75);
    CHECK(back.tolerance == 1e-9);
    CHECK(back.threads == 2);
    CHECK(back.out_dir == "artifacts");
    CHECK(back.debug_provenance == true);

    CHECK(render_config(back) == text);
}

TEST_CASE("counting command reproduces the table totals") {
    const fs::path dir = scratch("counts");
    const std::string cfg = write_text(dir / "four.json", kFourLinkConfig);
    const auto [rc, log] = run_cmd("check counts", cfg);
    CHECK(rc == 0);
    CHECK(contains(log, "PASS check counts"));
    CHECK(contains(log, "4 physical links"));
    CHECK_FALSE(contains(log, "MISMATCH"));

    const auto [rc2, log2] = run_cmd("check-counts", cfg);
    CHECK(rc2 == 0);
    const auto [rc3, log3] = run_cmd("check_counts", cfg);
    CHECK(rc3 == 0);
}

TEST_CASE("build reports both operator halves") {
    const fs::path dir = scratch("build");
    const std::string cfg = write_text(dir / "single.json", kSingleLinkConfig);
    const auto [rc, log] = run_cmd("build", cfg);
    CHECK(rc == 0);
    CHECK(contains(log, "PASS build"));
    CHECK(contains(log, "electric: dim 31"));
    CHECK(contains(log, "magnetic: dim 31"));
    CHECK(contains(log, "hermiticity defect"));

    const std::string strip = write_text(dir / "strip.json", kStripConfig);
    const auto [rc2, log2] = run_cmd("build", strip, "", -1.0, true);
    CHECK(rc2 == 0);
    CHECK(contains(log2, "11:d2 x"));
    CHECK(contains(log2, "loop:cos x"));
}

TEST_CASE("exports are deterministic and carry faithful metadata") {
    const fs::path dir = scratch("exports");
    const std::string cfg = write_text(dir / "strip.json", kStripConfig);
    const fs::path out = dir / "out";
    fs::create_directories(out);

    const auto [rc, log] = run_cmd("export matrix", cfg, out.string());
    CHECK(rc == 0);
    CHECK(contains(log, "electric.mtx"));

    const std::string electric = read_text(out / "electric.mtx");
    const std::string magnetic = read_text(out / "magnetic.mtx");
    const std::string meta = read_text(out / "electric.meta.json");
    CHECK(electric.rfind("%%MatrixMarket matrix coordinate complex general",
                         0) == 0);

    const auto [rc2, log2] = run_cmd("export matrix", cfg, out.string());
    CHECK(rc2 == 0);
    CHECK(read_text(out / "electric.mtx") == electric);
    CHECK(read_text(out / "magnetic.mtx") == magnetic);
    CHECK(read_text(out / "electric.meta.json") == meta);

    const nlohmann::json j = nlohmann::json::parse(meta);
    CHECK(j.at("which") == "electric");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(electric)));
    CHECK(j.at("content_hash_fnv1a") == std::string(hash));

    const std::string echo = j.at("config").dump(2) + "\n";
    const std::string echo_path = write_text(dir / "echo.json", echo);
    const RunConfig back = load_config(echo_path);
    CHECK(back.lattice.dims == std::vector<int>{3, 2});
    CHECK(back.n_omega == 3);
    CHECK(back.truncation.l_max == 1);
    CHECK(back.out_dir == out.string());

    const LatticeTree tree = build_lattice(back);
    const AssembledOperator he =
        assemble_electric(tree, hamiltonian_params(back));
    CHECK(j.at("dim").get<long>() == he.dim());
    CHECK(j.at("nnz").get<long>() == he.matrix.nonZeros());
    CHECK(j.at("radial_dim").get<long>() == he.radial_dim());

    nlohmann::json explicit_tree = nlohmann::json::parse(kStripConfig);
    explicit_tree["tree_links"] = build_maximal_tree(back.lattice).tree_links;
    const std::string cfg2 =
        write_text(dir / "explicit.json", explicit_tree.dump(2));
    const fs::path out2 = dir / "out2";
    fs::create_directories(out2);
    const auto [rc3, log3] = run_cmd("export matrix", cfg2, out2.string());
    CHECK(rc3 == 0);
    CHECK(read_text(out2 / "electric.mtx") == electric);

    const auto [rc4, log4] = run_cmd("export basis", cfg, out.string());
    CHECK(rc4 == 0);
    const std::string basis = read_text(out / "basis.tsv");
    CHECK(basis.rfind("# index", 0) == 0);
    const long lines =
        std::count(basis.begin(), basis.end(), '\n');
    CHECK(lines == 1 + static_cast<long>(he.angular.dim()));

    const auto [rc5, log5] = run_cmd("export catalog", cfg, out.string());
    CHECK(rc5 == 0);
    const nlohmann::json cat =
        nlohmann::json::parse(read_text(out / "catalog.json"));
    REQUIRE(cat.is_array());
    CHECK(cat.size() == catalog(tree.n_physical()).size());
    for (const auto& entry : cat) {
        CHECK(entry.contains("name"));
        CHECK(entry.at("footprint").at("max_rods_changed").get<int>() <= 3);
    }
}

TEST_CASE("spectrum prints ascending eigenvalues that match the library") {
    const fs::path dir = scratch("spectrum");
    const std::string cfg = write_text(dir / "single.json", kSingleLinkConfig);
    const auto [rc, log] = run_cmd("spectrum", cfg);
    CHECK(rc == 0);
    CHECK(contains(log, "lowest eigenvalues (dim 31)"));

    std::vector<double> printed;
    std::istringstream iss(log);
    std::string line;
    while (std::getline(iss, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        printed.push_back(std::stod(line.substr(eq + 3)));
    }
    REQUIRE(printed.size() == 5);
    CHECK(std::is_sorted(printed.begin(), printed.end()));

    const RunConfig c = load_config(cfg);
    const LatticeTree tree = build_lattice(c);
    const HamiltonianParams p = hamiltonian_params(c);
    const CplxSparse h = assemble_electric(tree, p).matrix +
                         assemble_magnetic(tree, p).matrix;
    const std::vector<double> want = spectrum(h, 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(printed[i] - want[i]) <= 1e-9);
}

TEST_CASE("resources command emits the cost envelopes") {
    const fs::path dir = scratch("resources");
    const std::string cfg = write_text(dir / "four.json", kFourLinkConfig);
    const auto [rc, log] = run_cmd("resources", cfg);
    CHECK(rc == 0);
    CHECK(contains(log, "physical links: 4"));
    CHECK(contains(log, "electric bilinears (dense table): 64"));
    CHECK(contains(log, "degree of coupling: 3"));
    CHECK(contains(log, "rod1.rod1: 13"));
    CHECK(contains(log, "trotter steps envelope (p=1, t=1, eps=1e-2, alpha=1): 100"));

    const std::string single =
        write_text(dir / "single.json", kSingleLinkConfig);
    const auto [rc2, log2] = run_cmd("resources", single);
    CHECK(rc2 == 0);
    CHECK(contains(log2, "single-link reduction"));
    CHECK(contains(log2, "degree of coupling: 1"));
}

TEST_CASE("verification sweeps pass and fail by tolerance") {
    const fs::path dir = scratch("sweeps");
    const std::string cfg = write_text(dir / "single.json", kSingleLinkConfig);

    const auto [rc_frames, log_frames] = run_cmd("check frames", cfg);
    CHECK(rc_frames == 0);
    CHECK(contains(log_frames, "PASS check frames"));
    CHECK(contains(log_frames, "10000 random configurations"));

    const auto [rc_oracle, log_oracle] = run_cmd("check oracle", cfg);
    CHECK(rc_oracle == 0);
    CHECK(contains(log_oracle, "PASS check oracle"));

    const auto [rc_tight, log_tight] =
        run_cmd("check frames", cfg, "", 1e-30);
    CHECK(rc_tight == 1);
    CHECK(contains(log_tight, "FAIL check frames"));
    CHECK(contains(log_tight, "error CheckFailed"));
}
