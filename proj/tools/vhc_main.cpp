#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "vhc/assembly.hpp"
#include "vhc/configuration.hpp"
#include "vhc/field_export.hpp"
#include "vhc/helix.hpp"
#include "vhc/residual.hpp"
#include "vhc/serialize.hpp"

using nlohmann::json;

namespace {

struct SRange {
    double lo = 0.0, hi = 1.0;
    int n = 100;
};

SRange parse_range(const std::string& text) {
    SRange r;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &r.lo, &r.hi, &r.n) != 3)
        throw CLI::ValidationError("--s-range", "expected lo:hi:n");
    if (r.n < 2) throw CLI::ValidationError("--s-range", "need n >= 2");
    return r;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

int run_helix_sample(double a, double b, double h, double kappa,
                     const std::string& range_text, double tau,
                     const std::string& out_path) {
    const SRange range = parse_range(range_text);
    vhc::HelixSpec spec(a, b, h, kappa);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw vhc::IoError("cannot open " + out_path);
        os = &file;
    }
    (*os) << "s,x1,x2,x3,curvature,torsion\n";
    char buf[256];
    for (int i = 0; i < range.n; ++i) {
        const double s = range.lo + (range.hi - range.lo) * i / (range.n - 1);
        const vhc::FrenetSample f = vhc::frenet(spec, s, tau);
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s, f.point.x,
                      f.point.y, f.point.z, f.curvature, f.torsion);
        (*os) << buf;
    }
    return 0;
}

int run_config_solve(int m, int n, double h, double r0,
                     const std::vector<double>& kappas,
                     const std::string& guess_path, const std::string& out_path) {
    vhc::ClusterCharges charges;
    std::pair<vhc::ClusterConfiguration, vhc::BalanceReport> solved;
    if (!kappas.empty() || !guess_path.empty()) {
        if (kappas.empty() || guess_path.empty())
            throw CLI::ValidationError("config solve",
                                       "--kappas and --guess go together");
        charges.kappas = kappas;
        charges.h = h;
        charges.r0 = r0;
        const json j = vhc::read_json(guess_path);
        std::vector<vhc::Complex> guess;
        for (const auto& e : j.at("points"))
            guess.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        solved = vhc::solve_configuration(charges, guess);
    } else {
        charges = vhc::sb_charges(m, n, h, r0);
        solved = vhc::sb_family(m, n, h, r0);
    }
    const json j = vhc::configuration_json(solved.first, charges, &solved.second);
    if (out_path.empty())
        std::cout << j.dump(2) << std::endl;
    else
        vhc::write_json(out_path, j);
    std::cerr << "residual " << solved.second.residual << ", d "
              << solved.first.d << "\n";
    return 0;
}

int run_config_check(const std::string& path) {
    auto [config, charges] = vhc::load_configuration(path);
    const auto res = vhc::balance_residual(config, charges);
    double rmax = 0.0;
    for (const auto& c : res) rmax = std::max(rmax, std::abs(c));
    const double alpha = vhc::alpha_constant(charges);
    const auto cert = vhc::nondegeneracy_certificate(config, charges, 1e-8, false);
    json j;
    j["residual"] = rmax;
    j["alpha_recomputed"] = alpha;
    j["alpha_stored"] = config.alpha;
    j["d"] = config.d;
    j["sigma_min_symmetric"] = cert.sigma_min_symmetric;
    j["kernel_dimension"] = cert.kernel_dimension;
    j["nondegenerate"] = cert.passed;
    std::cout << j.dump(2) << std::endl;
    const bool ok = rmax < 1e-10 && std::fabs(alpha - config.alpha) < 1e-12;
    return ok ? 0 : 1;
}

int run_assemble(const std::string& config_path, double eps, double delta,
                 double delta1, double s, const std::string& out_path,
                 std::string sidecar_path, int grid_nodes, int K) {
    auto [config, charges] = vhc::load_configuration(config_path);
    vhc::AssemblyParams params = vhc::AssemblyParams::from_configuration(
        config, charges, eps, delta, delta1, s);
    if (grid_nodes > 0) params.grid_nodes = grid_nodes;
    if (K > 0) params.K = K;
    const vhc::StreamAssembly assembly = vhc::StreamAssembly::build(params);
    if (sidecar_path.empty()) {
        sidecar_path = out_path;
        const auto pos = sidecar_path.rfind(".json");
        if (pos != std::string::npos) sidecar_path.erase(pos);
        sidecar_path += "_modes.csv";
    }
    vhc::save_assembly(out_path, sidecar_path, assembly);
    std::cerr << "sweeps " << assembly.sweep_deltas().size()
              << ", mu relation residual " << assembly.mu_relation_residual()
              << "\n";
    return 0;
}

int run_residual_scan(const std::string& assembly_path, int samples,
                      const std::string& out_path) {
    const vhc::StreamAssembly a = vhc::load_assembly(assembly_path);
    const int n_r = std::max(16, samples / 64);
    json inner = json::array();
    for (int i = 0; i < a.params().count(); ++i) {
        const vhc::RegionScan s = vhc::scan_inner(a, i, n_r, 32);
        const vhc::KernelProjections pr = vhc::kernel_projections(i, a);
        inner.push_back({{"filament", i},
                         {"sup_weighted", s.sup_weighted},
                         {"argmax_y", s.argmax.y_norm},
                         {"samples", int(s.samples.size())},
                         {"projections",
                          vhc::projections_json(pr, i,
                                                a.params().eps * a.mu()[i])}});
    }
    const vhc::RegionScan so = vhc::scan_outer(a);
    json j;
    j["eps"] = a.params().eps;
    j["inner"] = inner;
    j["outer"] = {{"sup_weighted", so.sup_weighted},
                  {"samples", int(so.samples.size())}};
    if (out_path.empty())
        std::cout << j.dump(2) << std::endl;
    else
        vhc::write_json(out_path, j);
    return 0;
}

int run_rates(const std::string& cluster_path, const std::string& eps_list,
              double delta, double delta1, const std::string& out_path) {
    auto [config, charges] = vhc::load_configuration(cluster_path);
    const std::vector<double> ladder = parse_list(eps_list);
    std::vector<vhc::StreamAssembly> assemblies;
    assemblies.reserve(ladder.size());
    for (double eps : ladder)
        assemblies.push_back(vhc::StreamAssembly::build(
            vhc::AssemblyParams::from_configuration(config, charges, eps, delta,
                                                    delta1)));
    std::vector<const vhc::StreamAssembly*> ptrs;
    for (const auto& a : assemblies) ptrs.push_back(&a);
    const vhc::RateStudy study = vhc::rate_study(ptrs);
    const json j = vhc::rate_report_json(study);
    if (out_path.empty())
        std::cout << j.dump(2) << std::endl;
    else
        vhc::write_json(out_path, j);
    return 0;
}

int run_field_export(const std::string& assembly_path, int grid_n,
                     const std::string& bounds_text, const std::string& format,
                     const std::string& out_path) {
    const vhc::StreamAssembly a = vhc::load_assembly(assembly_path);
    const std::vector<double> b = parse_list(bounds_text);
    if (b.size() != 6)
        throw CLI::ValidationError("--bounds", "expected x0,x1,y0,y1,z0,z1");
    const vhc::VorticityGrid3D grid = vhc::sample_vorticity_grid(
        a, {b[0], b[2], b[4]}, {b[1], b[3], b[5]}, grid_n);
    vhc::FieldFormat fmt;
    if (format == "csv")
        fmt = vhc::FieldFormat::Csv;
    else if (format == "vtk-legacy-ascii")
        fmt = vhc::FieldFormat::VtkLegacyAscii;
    else
        throw CLI::ValidationError("--format", "csv or vtk-legacy-ascii");
    vhc::export_field(grid, out_path, fmt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"helical vortex cluster toolkit"};
    app.require_subcommand(1);

    // helix sample
    auto* helix = app.add_subcommand("helix", "helix geometry utilities");
    helix->require_subcommand(1);
    auto* sample = helix->add_subcommand("sample", "sample a helix as CSV");
    double ha = 1.0, hb = 0.0, hh = 1.0, hk = 1.0, htau = 0.0;
    std::string hrange = "0:6.283185307179586:101", hout;
    sample->add_option("--a", ha, "first base coordinate");
    sample->add_option("--b", hb, "second base coordinate");
    sample->add_option("--h", hh, "pitch")->check(CLI::PositiveNumber);
    sample->add_option("--kappa", hk, "circulation");
    sample->add_option("--s-range", hrange, "arclength range lo:hi:n");
    sample->add_option("--tau", htau, "slow time");
    sample->add_option("--out", hout, "output file (default stdout)");

    // config solve / check
    auto* config = app.add_subcommand("config", "balancing system solvers");
    config->require_subcommand(1);
    auto* csolve = config->add_subcommand("solve", "solve the balancing system");
    int cm = 2, cn = 1;
    double ch = 1.0, cr0 = 1.0;
    std::vector<double> ckappas;
    std::string cguess, cout_path;
    csolve->add_option("--m", cm, "positive unit charges");
    csolve->add_option("--n", cn, "negative unit charges");
    csolve->add_option("--h", ch, "pitch")->check(CLI::PositiveNumber);
    csolve->add_option("--r0", cr0, "cluster radius")->check(CLI::PositiveNumber);
    csolve->add_option("--kappas", ckappas, "explicit circulations");
    csolve->add_option("--guess", cguess, "json file with initial points");
    csolve->add_option("--out", cout_path, "output json (default stdout)");
    auto* ccheck = config->add_subcommand("check", "re-verify a solved file");
    std::string ccheck_path;
    ccheck->add_option("file", ccheck_path, "configuration json")->required();

    // assemble
    auto* assemble = app.add_subcommand("assemble", "build the stream assembly");
    std::string aconfig, aout = "assembly.json", asidecar;
    double aeps = 1e-3, adelta = 0.2, adelta1 = 0.03, as = 0.0;
    int agrid = 0, aK = 0;
    assemble->add_option("--config", aconfig, "configuration json")->required();
    assemble->add_option("--eps", aeps, "epsilon")->check(CLI::PositiveNumber);
    assemble->add_option("--delta", adelta, "inner-region scale");
    assemble->add_option("--delta1", adelta1, "gluing scale");
    assemble->add_option("--s", as, "cluster radial offset");
    assemble->add_option("--out", aout, "output json");
    assemble->add_option("--sidecar", asidecar, "mode sample csv");
    assemble->add_option("--grid-nodes", agrid, "radial nodes override");
    assemble->add_option("--K", aK, "angular truncation override");

    // residual scan
    auto* residual = app.add_subcommand("residual", "residual diagnostics");
    residual->require_subcommand(1);
    auto* rscan = residual->add_subcommand("scan", "scan S[Psi_0] by region");
    std::string rassembly, rout;
    int rsamples = 4096;
    rscan->add_option("--assembly", rassembly, "assembly json")->required();
    rscan->add_option("--samples", rsamples, "sample budget");
    rscan->add_option("--out", rout, "report json (default stdout)");

    // rates
    auto* rates = app.add_subcommand("rates", "epsilon-ladder decay rates");
    std::string rcluster, reps = "1e-2,1e-3,1e-4", rates_out;
    double rdelta = 0.45, rdelta1 = 0.2;
    rates->add_option("--cluster", rcluster, "configuration json")->required();
    rates->add_option("--eps", reps, "comma-separated ladder");
    rates->add_option("--delta", rdelta, "inner-region scale");
    rates->add_option("--delta1", rdelta1, "gluing scale");
    rates->add_option("--out", rates_out, "rates json (default stdout)");

    // field export
    auto* field = app.add_subcommand("field", "3d vorticity export");
    field->require_subcommand(1);
    auto* fexport = field->add_subcommand("export", "sample and export omega");
    std::string fassembly, fbounds = "-2,2,-2,2,0,4", fformat = "csv",
                fout = "field.csv";
    int fgrid = 64;
    fexport->add_option("--assembly", fassembly, "assembly json")->required();
    fexport->add_option("--grid", fgrid, "nodes per axis");
    fexport->add_option("--bounds", fbounds, "x0,x1,y0,y1,z0,z1");
    fexport->add_option("--format", fformat, "csv | vtk-legacy-ascii");
    fexport->add_option("--out", fout, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed())
            return run_helix_sample(ha, hb, hh, hk, hrange, htau, hout);
        if (csolve->parsed())
            return run_config_solve(cm, cn, ch, cr0, ckappas, cguess, cout_path);
        if (ccheck->parsed()) return run_config_check(ccheck_path);
        if (assemble->parsed())
            return run_assemble(aconfig, aeps, adelta, adelta1, as, aout,
                                asidecar, agrid, aK);
        if (rscan->parsed()) return run_residual_scan(rassembly, rsamples, rout);
        if (rates->parsed())
            return run_rates(rcluster, reps, rdelta, rdelta1, rates_out);
        if (fexport->parsed())
            return run_field_export(fassembly, fgrid, fbounds, fformat, fout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
