#include "smb/exports.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "smb/errors.hpp"

namespace smb {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string &text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string to_matrix_market(const CplxSparse &m) {
    std::string out = "%%MatrixMarket matrix coordinate complex general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
           std::to_string(m.nonZeros()) + "\n";
    for (int k = 0; k < m.outerSize(); ++k) {
        for (CplxSparse::InnerIterator it(m, k); it; ++it) {
            out += std::to_string(it.row() + 1) + " " +
                   std::to_string(it.col() + 1) + " " +
                   fmt_double(it.value().real()) + " " +
                   fmt_double(it.value().imag()) + "\n";
        }
    }
    return out;
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open " + path + " for writing");
    out << content;
    if (!out)
        throw ConfigError("failed while writing " + path);
}

std::string matrix_metadata(const RunConfig &c, const AssembledOperator &op,
                            const std::string &matrix_text,
                            const std::string &which) {
    nlohmann::json j;
    j["which"] = which;
    j["config"] = nlohmann::json::parse(render_config(c));
    j["n_rods"] = op.n_rods;
    j["n_omega"] = op.n_omega;
    j["radial_dim"] = op.radial_dim();
    j["angular_dim"] = op.angular.dim();
    j["dim"] = op.dim();
    j["nnz"] = op.matrix.nonZeros();
    j["layout"] =
        "global index = radial + radial_dim * angular; radial digits in base "
        "n_omega with rod 1 fastest";
    j["asymmetry_norm"] = op.report.asymmetry_norm;
    j["matrix_norm"] = op.report.matrix_norm;
    j["term_count"] = op.report.term_count;
    if (!op.report.term_tally.empty())
        j["term_tally"] = op.report.term_tally;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(matrix_text));
    j["content_hash_fnv1a"] = hash;
    return j.dump(2) + "\n";
}

std::string basis_table(const BasisIndex &basis) {
    std::string out = "# index\tn\trods(l:m)\tL\tM\tN\tsigma\n";
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const AngularState &s = basis.state(i);
        out += std::to_string(i) + "\t" + std::to_string(s.n) + "\t";
        if (s.rods.empty()) {
            out += "-";
        } else {
            for (std::size_t r = 0; r < s.rods.size(); ++r) {
                if (r)
                    out += ",";
                out += std::to_string(s.rods[r].l) + ":" +
                       std::to_string(s.rods[r].m);
            }
        }
        out += "\t" + std::to_string(s.L) + "\t" + std::to_string(s.M) +
               "\t" + std::to_string(s.N) + "\t" + std::to_string(s.sigma) +
               "\n";
    }
    return out;
}

std::string catalog_table(int n_rods) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CatalogEntry &e : catalog(n_rods)) {
        nlohmann::json j;
        j["name"] = e.name;
        j["rods"] = nlohmann::json::array();
        if (e.op.mu)
            j["rods"].push_back(e.op.mu);
        if (e.op.nu)
            j["rods"].push_back(e.op.nu);
        if (e.op.la)
            j["rods"].push_back(e.op.la);
        const Footprint f = footprint(e.op);
        j["footprint"]["changes_radial_tower"] = f.can_change_n;
        j["footprint"]["changes_body_projection"] = f.can_change_body_n;
        j["footprint"]["changes_rod_l"] = f.can_change_l;
        j["footprint"]["changes_rod_m"] = f.can_change_m;
        j["footprint"]["sigma_deltas"] = f.sigma_deltas;
        j["footprint"]["max_rods_changed"] = f.max_rods_changed;
        j["multiplicative"] = is_multiplicative(e.op.kind);
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

} // namespace smb
