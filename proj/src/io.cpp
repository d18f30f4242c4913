#include "hsurf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hsurf/error.hpp"

namespace hsurf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (size_t k = 0; k < header.size(); ++k)
        out << header[k] << (k + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t k = 0; k < row.size(); ++k)
            out << format_double(row[k]) << (k + 1 < row.size() ? "," : "\n");
    }
    write_text(path, out.str());
}

void write_curve_csv(const std::string& path, const PlanarCurveSolution& sol) {
    std::vector<std::vector<double>> rows;
    rows.reserve(sol.s.size());
    for (size_t k = 0; k < sol.s.size(); ++k)
        rows.push_back({sol.s[k], sol.theta[k], sol.points[k].x(), sol.points[k].y()});
    write_csv(path, {"s", "theta", "x", "y"}, rows);
}

void write_profile_csv(const std::string& path, const ProfileCurve& prof) {
    std::vector<std::vector<double>> rows;
    rows.reserve(prof.size());
    for (size_t k = 0; k < prof.size(); ++k)
        rows.push_back({prof.s[k], prof.x[k], prof.z[k], prof.theta[k]});
    write_csv(path, {"s", "x", "z", "theta"}, rows);
}

void write_svg_polyline(const std::string& path, const std::vector<Vec2>& points,
                        int pixel_size) {
    if (points.empty()) throw ConfigError("empty polyline");
    double xmin = points[0].x(), xmax = xmin, ymin = points[0].y(), ymax = ymin;
    for (const Vec2& p : points) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double pad = 0.05 * span;
    const double scale = pixel_size / (span + 2 * pad);

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixel_size
        << "\" height=\"" << pixel_size << "\" viewBox=\"0 0 " << pixel_size << " "
        << pixel_size << "\">\n";
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < points.size(); ++k) {
        const double px = (points[k].x() - xmin + pad) * scale;
        // SVG y axis points down.
        const double py = pixel_size - (points[k].y() - ymin + pad) * scale;
        out << format_double(px) << "," << format_double(py)
            << (k + 1 < points.size() ? " " : "");
    }
    out << "\"/>\n</svg>\n";
    write_text(path, out.str());
}

void write_obj(const std::string& path, const DiscreteSurface& surface) {
    std::ostringstream out;
    for (int v = 0; v < surface.vertex_count(); ++v) {
        const Vec3& p = surface.position(v);
        out << "v " << format_double(p.x()) << " " << format_double(p.y()) << " "
            << format_double(p.z()) << "\n";
    }
    for (int v = 0; v < surface.vertex_count(); ++v) {
        const Vec3& n = surface.normal(v);
        out << "vn " << format_double(n.x()) << " " << format_double(n.y()) << " "
            << format_double(n.z()) << "\n";
    }
    std::vector<std::array<int, 3>> faces;
    if (surface.kind() == DiscreteSurface::Kind::Graph) {
        const GridDomain& d = *surface.graph_domain();
        for (int j = 0; j + 1 < d.ny(); ++j)
            for (int i = 0; i + 1 < d.nx(); ++i) {
                const int a = surface.vertex_of_node(i, j);
                const int b = surface.vertex_of_node(i + 1, j);
                const int c = surface.vertex_of_node(i, j + 1);
                const int e = surface.vertex_of_node(i + 1, j + 1);
                if (a >= 0 && b >= 0 && c >= 0) faces.push_back({a, b, c});
                if (b >= 0 && e >= 0 && c >= 0) faces.push_back({b, e, c});
            }
    } else {
        const auto* L = surface.revolved();
        const int R = L->ring_rows, C = L->cols;
        for (int c = 0; c < C; ++c)
            faces.push_back({0, L->vertex_of(0, c), L->vertex_of(0, c + 1)});
        for (int r = 0; r + 1 < R; ++r)
            for (int c = 0; c < C; ++c) {
                const int a = L->vertex_of(r, c), b = L->vertex_of(r, c + 1);
                const int e = L->vertex_of(r + 1, c), f = L->vertex_of(r + 1, c + 1);
                faces.push_back({a, b, e});
                faces.push_back({b, f, e});
            }
        if (L->north_pole) {
            const int np = surface.vertex_count() - 1;
            for (int c = 0; c < C; ++c)
                faces.push_back({np, L->vertex_of(R - 1, c + 1), L->vertex_of(R - 1, c)});
        }
    }
    for (const auto& f : faces)
        out << "f " << f[0] + 1 << "//" << f[0] + 1 << " " << f[1] + 1 << "//"
            << f[1] + 1 << " " << f[2] + 1 << "//" << f[2] + 1 << "\n";
    write_text(path, out.str());
}

void write_vertex_fields_csv(const std::string& path, const DiscreteSurface& surface,
                             const std::map<std::string, std::vector<double>>& fields) {
    std::vector<std::string> header = {"x", "y", "z"};
    for (const auto& [name, values] : fields) {
        if (int(values.size()) != surface.vertex_count())
            throw ConfigError("field '" + name + "' has wrong length");
        header.push_back(name);
    }
    std::vector<std::vector<double>> rows(surface.vertex_count());
    for (int v = 0; v < surface.vertex_count(); ++v) {
        auto& row = rows[v];
        const Vec3& p = surface.position(v);
        row = {p.x(), p.y(), p.z()};
        for (const auto& [name, values] : fields) row.push_back(values[v]);
    }
    write_csv(path, header, rows);
}

void write_matrix_triplets(const std::string& path, const SparseMat& m) {
    std::ostringstream out;
    out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
    for (int col = 0; col < m.outerSize(); ++col)
        for (SparseMat::InnerIterator it(m, col); it; ++it)
            out << it.row() << " " << it.col() << " " << format_double(it.value())
                << "\n";
    write_text(path, out.str());
}

} // namespace hsurf
