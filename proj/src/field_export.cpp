#include "vhc/field_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vhc {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void export_field(const VorticityGrid3D& g, const std::string& path,
                  FieldFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("export_field: cannot open " + path);
    if (format == FieldFormat::Csv) {
        out << "x1,x2,x3,w1,w2,w3\n";
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const Vec3 p = g.point(i, j, k);
                    const Vec3& w = g.samples[g.index(i, j, k)];
                    out << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(p.z)
                        << ',' << fmt17(w.x) << ',' << fmt17(w.y) << ','
                        << fmt17(w.z) << '\n';
                }
    } else {
        out << "# vtk DataFile Version 3.0\n";
        out << "helical vorticity field\n";
        out << "ASCII\n";
        out << "DATASET STRUCTURED_POINTS\n";
        out << "DIMENSIONS " << g.nx << ' ' << g.ny << ' ' << g.nz << '\n';
        out << "ORIGIN " << fmt17(g.origin.x) << ' ' << fmt17(g.origin.y) << ' '
            << fmt17(g.origin.z) << '\n';
        out << "SPACING " << fmt17(g.spacing.x) << ' ' << fmt17(g.spacing.y)
            << ' ' << fmt17(g.spacing.z) << '\n';
        out << "POINT_DATA " << g.samples.size() << '\n';
        out << "VECTORS vorticity double\n";
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const Vec3& w = g.samples[g.index(i, j, k)];
                    out << fmt17(w.x) << ' ' << fmt17(w.y) << ' ' << fmt17(w.z)
                        << '\n';
                }
    }
    if (!out) throw IoError("export_field: write failed for " + path);
}

VorticityGrid3D read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_field_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_field_csv: empty file");

    std::vector<Vec3> points, values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v[6];
        char comma;
        for (int c = 0; c < 6; ++c) {
            ss >> v[c];
            if (c + 1 < 6) ss >> comma;
        }
        if (!ss) throw IoError("read_field_csv: malformed row");
        points.push_back({v[0], v[1], v[2]});
        values.push_back({v[3], v[4], v[5]});
    }

    VorticityGrid3D g;
    const std::size_t total = points.size();
    const double n_cubed = std::cbrt(double(total));
    const int n = int(std::lround(n_cubed));
    if (std::size_t(n) * n * n != total)
        throw IoError("read_field_csv: sample count is not a cube");
    g.nx = g.ny = g.nz = n;
    g.origin = points.front();
    const Vec3 last = points.back();
    g.spacing = {(last.x - g.origin.x) / (n - 1), (last.y - g.origin.y) / (n - 1),
                 (last.z - g.origin.z) / (n - 1)};
    g.samples = std::move(values);
    return g;
}

}  // namespace vhc
