#include "vhc/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace vhc {

using nlohmann::json;

namespace {

json complex_list(const std::vector<Complex>& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back({c.real(), c.imag()});
    return out;
}

std::vector<Complex> complex_list_from(const json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) out.emplace_back(e.at(0).get<double>(),
                                             e.at(1).get<double>());
    return out;
}

}  // namespace

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("write_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_json: cannot open " + path);
    json j;
    in >> j;
    return j;
}

json configuration_json(const ClusterConfiguration& config,
                        const ClusterCharges& charges,
                        const BalanceReport* report) {
    json j;
    j["kappas"] = charges.kappas;
    j["h"] = charges.h;
    j["r0"] = charges.r0;
    j["points"] = complex_list(config.points);
    j["alpha"] = config.alpha;
    j["gauge"] = {config.gauge.real(), config.gauge.imag()};
    j["d"] = config.d;
    if (report) {
        j["residual"] = report->residual;
        j["singular_values"] = report->singular_values;
        j["kernel_dimension"] = report->kernel_dimension;
        j["cokernel_check"] = report->cokernel_check;
        j["newton_iterations"] = report->newton_iterations;
    }
    return j;
}

void save_configuration(const std::string& path,
                        const ClusterConfiguration& config,
                        const ClusterCharges& charges,
                        const BalanceReport* report) {
    write_json(path, configuration_json(config, charges, report));
}

std::pair<ClusterConfiguration, ClusterCharges> load_configuration(
    const std::string& path) {
    const json j = read_json(path);
    ClusterCharges charges;
    charges.kappas = j.at("kappas").get<std::vector<double>>();
    charges.h = j.at("h").get<double>();
    charges.r0 = j.at("r0").get<double>();
    ClusterConfiguration config;
    config.points = complex_list_from(j.at("points"));
    config.alpha = j.at("alpha").get<double>();
    config.refresh_derived();
    return {config, charges};
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_assembly(const std::string& json_path, const std::string& sidecar_path,
                   const StreamAssembly& a) {
    const AssemblyParams& p = a.params();
    json j;
    j["eps"] = p.eps;
    j["delta"] = p.delta;
    j["delta1"] = p.delta1;
    j["r0"] = p.r0;
    j["h"] = p.h;
    j["s"] = p.s;
    j["kappas"] = p.kappas;
    j["cluster_points"] = complex_list(p.cluster_points);
    j["cluster_d"] = p.cluster_d;
    j["grid"] = {{"rmin", p.grid_rmin},
                 {"rmax", p.grid_rmax},
                 {"nodes", p.grid_nodes},
                 {"K", p.K},
                 {"nu", p.nu}};
    j["anchor"] = {p.anchor.x, p.anchor.y};
    j["alpha"] = a.alpha();
    j["mu"] = a.mu();
    {
        json pts = json::array();
        for (const auto& q : a.points()) pts.push_back({q.x, q.y});
        j["P"] = pts;
    }
    j["h2e_offset"] = a.H2eps().offset;
    j["h2e_sidecar"] = std::filesystem::path(sidecar_path).filename().string();

    // sentinels for restore verification
    json sentinels = json::array();
    for (double rr : {0.2, 0.6, 1.4}) {
        const Vec2 x{p.r0 + rr, 0.3 * rr};
        sentinels.push_back({x.x, x.y, a.H2eps().value(x)});
    }
    j["h2e_sentinels"] = sentinels;
    write_json(json_path, j);

    std::ofstream side(sidecar_path);
    if (!side) throw IoError("save_assembly: cannot open " + sidecar_path);
    side << "k,i,r,re_v,im_v,re_d1,im_d1,re_d2,im_d2\n";
    const auto& modes = a.H2eps().field.modes();
    const double drop = 1e-250;
    for (const auto& m : modes) {
        double amp = 0.0;
        for (const auto& c : m.samples()) amp = std::max(amp, std::abs(c));
        if (m.k > 0 && amp < drop) continue;
        const auto& nodes = m.nodes();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            side << m.k << ',' << i << ',' << fmt17(nodes[i]) << ','
                 << fmt17(m.samples()[i].real()) << ','
                 << fmt17(m.samples()[i].imag()) << ','
                 << fmt17(m.d1_samples()[i].real()) << ','
                 << fmt17(m.d1_samples()[i].imag()) << ','
                 << fmt17(m.d2_samples()[i].real()) << ','
                 << fmt17(m.d2_samples()[i].imag()) << '\n';
        }
    }
    if (!side) throw IoError("save_assembly: sidecar write failed");
}

StreamAssembly load_assembly(const std::string& json_path) {
    const json j = read_json(json_path);
    AssemblyParams p;
    p.eps = j.at("eps").get<double>();
    p.delta = j.at("delta").get<double>();
    p.delta1 = j.at("delta1").get<double>();
    p.r0 = j.at("r0").get<double>();
    p.h = j.at("h").get<double>();
    p.s = j.at("s").get<double>();
    p.kappas = j.at("kappas").get<std::vector<double>>();
    p.cluster_points = complex_list_from(j.at("cluster_points"));
    p.cluster_d = j.at("cluster_d").get<double>();
    const auto& g = j.at("grid");
    p.grid_rmin = g.at("rmin").get<double>();
    p.grid_rmax = g.at("rmax").get<double>();
    p.grid_nodes = g.at("nodes").get<int>();
    p.K = g.at("K").get<int>();
    p.nu = g.at("nu").get<double>();
    p.anchor = Vec2{j.at("anchor").at(0).get<double>(),
                    j.at("anchor").at(1).get<double>()};
    p.anchor_set = true;

    const std::vector<double> mu = j.at("mu").get<std::vector<double>>();

    // sidecar: rebuild the H2eps evaluator from stored mode samples
    const std::filesystem::path base =
        std::filesystem::path(json_path).parent_path();
    const std::string sidecar =
        (base / j.at("h2e_sidecar").get<std::string>()).string();
    std::ifstream side(sidecar);
    if (!side) throw IoError("load_assembly: cannot open sidecar " + sidecar);
    std::string line;
    std::getline(side, line);  // header

    std::vector<double> nodes;
    struct Row {
        int k;
        std::size_t i;
        Complex v, d1, d2;
        double r;
    };
    std::vector<Row> rows;
    while (std::getline(side, line)) {
        if (line.empty()) continue;
        Row row;
        double re_v, im_v, re_d1, im_d1, re_d2, im_d2;
        long long kk, ii;
        if (std::sscanf(line.c_str(),
                        "%lld,%lld,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &kk, &ii,
                        &row.r, &re_v, &im_v, &re_d1, &im_d1, &re_d2,
                        &im_d2) != 9)
            throw IoError("load_assembly: malformed sidecar row");
        row.k = int(kk);
        row.i = std::size_t(ii);
        row.v = {re_v, im_v};
        row.d1 = {re_d1, im_d1};
        row.d2 = {re_d2, im_d2};
        rows.push_back(row);
    }
    std::size_t n_nodes = 0;
    for (const auto& r : rows)
        if (r.k == 0) n_nodes = std::max(n_nodes, r.i + 1);
    nodes.resize(n_nodes);
    for (const auto& r : rows)
        if (r.k == 0) nodes[r.i] = r.r;
    auto nodes_ptr = std::make_shared<const std::vector<double>>(nodes);

    int K_present = 0;
    for (const auto& r : rows) K_present = std::max(K_present, r.k);
    std::vector<std::vector<Complex>> v(K_present + 1,
                                        std::vector<Complex>(n_nodes)),
        d1(K_present + 1, std::vector<Complex>(n_nodes)),
        d2(K_present + 1, std::vector<Complex>(n_nodes));
    for (const auto& r : rows) {
        v[r.k][r.i] = r.v;
        d1[r.k][r.i] = r.d1;
        d2[r.k][r.i] = r.d2;
    }
    std::vector<ModeFunction> modes;
    modes.reserve(K_present + 1);
    for (int k = 0; k <= K_present; ++k)
        modes.emplace_back(k, nodes_ptr, std::move(v[k]), std::move(d1[k]),
                           std::move(d2[k]));
    OuterSolveReport rep;
    rep.K = K_present;
    rep.nu = p.nu;
    AnchoredOuterField h2e;
    h2e.field = OuterField(p.h, nodes_ptr, std::move(modes), rep);
    h2e.anchor = p.anchor;
    h2e.offset = j.at("h2e_offset").get<double>();

    StreamAssembly out = StreamAssembly::restore(p, mu, std::move(h2e));

    // verify stored sentinels against the restored evaluator
    for (const auto& s : j.at("h2e_sentinels")) {
        const Vec2 x{s.at(0).get<double>(), s.at(1).get<double>()};
        const double want = s.at(2).get<double>();
        if (std::fabs(out.H2eps().value(x) - want) >
            1e-9 * (1.0 + std::fabs(want)))
            throw IoError("load_assembly: sentinel mismatch, sidecar corrupt");
    }
    return out;
}

json outer_report_json(const OuterSolveReport& report) {
    json j;
    j["nu"] = report.nu;
    j["K"] = report.K;
    json modes = json::array();
    for (const auto& m : report.modes) {
        modes.push_back({{"mode", m.k},
                         {"r_min", m.r_min},
                         {"r_max", m.r_max},
                         {"tail_bound", m.tail_bound},
                         {"residual_norm", m.residual_norm},
                         {"weighted_input_norm", m.weighted_input_norm}});
    }
    j["modes"] = modes;
    return j;
}

json rate_report_json(const RateStudy& study) {
    auto fit = [](const RateFit& f) {
        return json{{"eps", f.eps},
                    {"sup_spatial", f.sup_spatial},
                    {"constants", f.constants},
                    {"slope", f.slope},
                    {"constant_ratio", f.constant_ratio}};
    };
    return json{{"inner", fit(study.inner)}, {"outer", fit(study.outer)}};
}

json projections_json(const KernelProjections& p, int filament, double eps_mu) {
    return json{{"filament", filament}, {"radius", p.radius},
                {"c0", p.c0},           {"c1", p.c1},
                {"c2", p.c2},           {"eps_mu", eps_mu}};
}

}  // namespace vhc
