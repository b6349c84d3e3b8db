#include "smb/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "smb/errors.hpp"

namespace smb {

namespace {

using nlohmann::json;

void require_keys(const json &j, const std::string &where,
                  const std::set<std::string> &allowed) {
    if (!j.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown field " + where + "." + it.key());
    }
}

template <typename T>
T field(const json &j, const std::string &where, const std::string &key,
        const T &fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError("field " + where + "." + key +
                          " has the wrong type");
    }
}

template <typename T>
T required_field(const json &j, const std::string &where,
                 const std::string &key) {
    if (!j.contains(key))
        throw ConfigError("missing field " + where + "." + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError("field " + where + "." + key +
                          " has the wrong type");
    }
}

} // namespace

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") +
                          e.what());
    }
    require_keys(j, "config",
                 {"lattice", "tree_links", "roles", "truncation",
                  "pin_sector", "n_omega", "stencil", "g", "a", "tolerance",
                  "threads", "out_dir", "debug_provenance"});

    RunConfig c;
    if (!j.contains("lattice"))
        throw ConfigError("missing field config.lattice");
    const json &lat = j.at("lattice");
    require_keys(lat, "lattice", {"dims", "periodic"});
    c.lattice.dims = required_field<std::vector<int>>(lat, "lattice", "dims");
    c.lattice.periodic = field<std::vector<bool>>(
        lat, "lattice", "periodic",
        std::vector<bool>(c.lattice.dims.size(), false));
    if (c.lattice.periodic.size() != c.lattice.dims.size())
        throw ConfigError("field lattice.periodic must match lattice.dims");

    if (j.contains("tree_links"))
        c.tree_links = required_field<std::vector<int>>(j, "config",
                                                        "tree_links");

    if (j.contains("roles")) {
        const json &ro = j.at("roles");
        require_keys(ro, "roles", {"rod1_link", "rod2_link"});
        c.roles.rod1_link = field<int>(ro, "roles", "rod1_link", 1);
        c.roles.rod2_link = field<int>(ro, "roles", "rod2_link", 2);
    }

    if (j.contains("truncation")) {
        const json &tr = j.at("truncation");
        require_keys(tr, "truncation", {"l_max", "n_max", "sector"});
        c.truncation.l_max = field<int>(tr, "truncation", "l_max", 0);
        c.truncation.n_max = field<int>(tr, "truncation", "n_max", 0);
        if (tr.contains("sector")) {
            const json &se = tr.at("sector");
            require_keys(se, "truncation.sector", {"L", "M", "N"});
            c.truncation.sector.L = field<int>(se, "truncation.sector", "L", 0);
            c.truncation.sector.M = field<int>(se, "truncation.sector", "M", 0);
            if (se.contains("N"))
                c.truncation.sector.N =
                    required_field<int>(se, "truncation.sector", "N");
        }
        if (c.truncation.l_max < 0)
            throw ConfigError("field truncation.l_max must be non-negative");
        if (c.truncation.n_max < 0)
            throw ConfigError("field truncation.n_max must be non-negative");
    }

    c.pin_sector = field<bool>(j, "config", "pin_sector", true);
    c.n_omega = field<int>(j, "config", "n_omega", 15);
    if (c.n_omega < 1)
        throw ConfigError("field config.n_omega must be positive");

    const std::string stencil =
        field<std::string>(j, "config", "stencil", "second");
    if (stencil == "second")
        c.stencil = StencilOrder::Second;
    else if (stencil == "fourth")
        c.stencil = StencilOrder::Fourth;
    else
        throw ConfigError("field config.stencil must be second or fourth");

    c.g = field<double>(j, "config", "g", 1.0);
    c.a = field<double>(j, "config", "a", 1.0);
    if (c.g <= 0.0)
        throw ConfigError("field config.g must be positive");
    if (c.a <= 0.0)
        throw ConfigError("field config.a must be positive");
    c.tolerance = field<double>(j, "config", "tolerance", 1e-10);
    if (c.tolerance <= 0.0)
        throw ConfigError("field config.tolerance must be positive");
    c.threads = field<int>(j, "config", "threads", 0);
    if (c.threads < 0)
        throw ConfigError("field config.threads must be non-negative");
    c.out_dir = field<std::string>(j, "config", "out_dir", ".");
    c.debug_provenance = field<bool>(j, "config", "debug_provenance", false);
    return c;
}

std::string render_config(const RunConfig &c) {
    json j;
    j["lattice"]["dims"] = c.lattice.dims;
    j["lattice"]["periodic"] = c.lattice.periodic;
    if (c.tree_links)
        j["tree_links"] = *c.tree_links;
    j["roles"]["rod1_link"] = c.roles.rod1_link;
    j["roles"]["rod2_link"] = c.roles.rod2_link;
    j["truncation"]["l_max"] = c.truncation.l_max;
    j["truncation"]["n_max"] = c.truncation.n_max;
    j["truncation"]["sector"]["L"] = c.truncation.sector.L;
    j["truncation"]["sector"]["M"] = c.truncation.sector.M;
    if (c.truncation.sector.N)
        j["truncation"]["sector"]["N"] = *c.truncation.sector.N;
    j["pin_sector"] = c.pin_sector;
    j["n_omega"] = c.n_omega;
    j["stencil"] = c.stencil == StencilOrder::Second ? "second" : "fourth";
    j["g"] = c.g;
    j["a"] = c.a;
    j["tolerance"] = c.tolerance;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
    j["debug_provenance"] = c.debug_provenance;
    return j.dump(2) + "\n";
}

HamiltonianParams hamiltonian_params(const RunConfig &c) {
    HamiltonianParams p;
    p.g = c.g;
    p.a = c.a;
    p.truncation = c.truncation;
    p.pin_sector = c.pin_sector;
    p.n_omega = c.n_omega;
    p.stencil = c.stencil;
    p.roles = c.roles;
    p.debug_provenance = c.debug_provenance;
    return p;
}

LatticeTree build_lattice(const RunConfig &c) {
    if (c.tree_links)
        return build_maximal_tree(c.lattice, *c.tree_links);
    return build_maximal_tree(c.lattice);
}

} // namespace smb
