#include "reslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace reslab {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot open '" + path + "'");
    return out;
}

}  // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_width_csv(const WidthLawReport& rep, const std::string& path) {
    auto out = open_out(path);
    out << "h,grid_n,E,a,gap_ok,re_rho,im_rho,width,h_ln_width,pairing_dist,"
           "residual,drift_theta,drift_grid,drift_box,re_rho_shoot,im_rho_shoot,"
           "green_residual,action_at_E,corrected_stat,sandwich_upper,sandwich_lower\n";
    for (const auto& r : rep.rows) {
        out << fmt17(r.h) << ',' << r.grid_n << ',' << fmt17(r.energy) << ','
            << fmt17(r.gap) << ',' << (r.gap_ok ? 1 : 0) << ','
            << fmt17(r.rho.real()) << ',' << fmt17(r.rho.imag()) << ','
            << fmt17(r.width) << ',' << fmt17(r.stat) << ',' << fmt17(r.pairing_dist)
            << ',' << fmt17(r.residual) << ',' << fmt17(r.drift.theta) << ','
            << fmt17(r.drift.grid) << ',' << fmt17(r.drift.box) << ','
            << fmt17(r.has_shooting ? r.rho_shoot.real() : std::nan("")) << ','
            << fmt17(r.has_shooting ? r.rho_shoot.imag() : std::nan("")) << ','
            << fmt17(r.green_residual) << ',' << fmt17(r.action_at_energy) << ','
            << fmt17(r.corrected_stat) << ',' << (r.sandwich_upper ? 1 : 0) << ','
            << (r.sandwich_lower ? 1 : 0) << '\n';
    }
}

void write_width_json(const WidthLawReport& rep, double slope_bound,
                      const std::string& path) {
    nlohmann::ordered_json j;
    j["S0"] = rep.S0;
    j["S0_oracle"] = rep.S0_oracle;
    j["rows"] = rep.rows.size();
    j["fit_ok"] = rep.fit_ok;
    j["slope"] = rep.slope;
    j["intercept"] = rep.intercept;
    j["slope_error"] = rep.slope_error;
    j["slope_bound"] = slope_bound;
    j["corrected_fit_ok"] = rep.fit_corrected_ok;
    j["corrected_slope"] = rep.corrected_slope;
    j["corrected_slope_error"] = rep.corrected_slope_error;
    j["widths_monotone"] = rep.widths_monotone;
    j["all_rows_in_sandwich"] = rep.all_sandwich;
    nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
    for (const auto& [h, why] : rep.skipped)
        skipped.push_back({{"h", h}, {"reason", why}});
    j["skipped"] = skipped;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_width_svg(const WidthLawReport& rep, const std::string& path) {
    const int W = 640, H = 480, M = 56;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : rep.rows) {
        double x = 1.0 / r.h, y = std::log(r.width);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (rep.rows.empty()) {
        xmin = 0;
        xmax = 1;
        ymin = -1;
        ymax = 0;
    }
    double xpad = 0.08 * (xmax - xmin + 1e-9), ypad = 0.08 * (ymax - ymin + 1e-9);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto py = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M
        << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\""
        << H - M << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">1/h</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">ln |Im rho|</text>\n";

    auto draw_line = [&](double m, double c, const char* color, const char* dash) {
        double y1 = m * xmin + c, y2 = m * xmax + c;
        out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(y1) << "\" x2=\""
            << px(xmax) << "\" y2=\"" << py(y2) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"" << dash << "/>\n";
    };
    if (rep.fit_ok) draw_line(rep.slope, rep.intercept, "#1f77b4", "");
    if (!rep.rows.empty()) {
        // reference slope -2 S0 anchored at the first row
        double x0 = 1.0 / rep.rows.front().h, y0 = std::log(rep.rows.front().width);
        double c = y0 + 2.0 * rep.S0_oracle * x0;
        draw_line(-2.0 * rep.S0_oracle, c, "#d62728", " stroke-dasharray=\"6 4\"");
    }
    for (const auto& r : rep.rows) {
        out << "<circle cx=\"" << px(1.0 / r.h) << "\" cy=\"" << py(std::log(r.width))
            << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    }
    out << "<text x=\"" << M + 6 << "\" y=\"" << M - 8 << "\" font-size=\"12\">"
        << "fit slope=" << fmt17(rep.slope) << "  reference=-2*S0="
        << fmt17(-2.0 * rep.S0_oracle) << "</text>\n";
    out << "</svg>\n";
}

void write_agmon_csv(const AgmonField& field, const std::string& path) {
    auto out = open_out(path);
    const auto& g = field.grid;
    if (g.dim == 1) {
        out << "x,d\n";
        for (int i = 0; i < g.cells_per_axis; ++i) {
            double x[2];
            g.center(g.index(i), x);
            out << fmt17(x[0]) << ',' << fmt17(field.d[g.index(i)]) << '\n';
        }
    } else {
        out << "x,y,d\n";
        for (int i = 0; i < g.cells_per_axis; ++i)
            for (int j = 0; j < g.cells_per_axis; ++j) {
                double x[2];
                g.center(g.index(i, j), x);
                out << fmt17(x[0]) << ',' << fmt17(x[1]) << ','
                    << fmt17(field.d[g.index(i, j)]) << '\n';
            }
    }
}

void write_decomposition_json(const SublevelDecomposition& decomp, double S0,
                              const GeodesicSet* geodesics, const std::string& path) {
    nlohmann::ordered_json j;
    j["dim"] = decomp.grid.dim;
    j["box_radius"] = decomp.grid.box_radius;
    j["cells_per_axis"] = decomp.grid.cells_per_axis;
    // run-length encoded labels (value, count) in row-major order
    nlohmann::ordered_json rle = nlohmann::ordered_json::array();
    const auto& L = decomp.labels;
    for (std::size_t i = 0; i < L.size();) {
        std::size_t jx = i;
        while (jx < L.size() && L[jx] == L[i]) ++jx;
        rle.push_back({static_cast<int>(L[i]), jx - i});
        i = jx;
    }
    j["labels_rle"] = rle;
    auto pts = [](const std::vector<std::array<double, 2>>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& p : v) a.push_back({p[0], p[1]});
        return a;
    };
    j["well_boundary"] = pts(decomp.well_boundary);
    j["sea_boundary"] = pts(decomp.sea_boundary);
    j["well_compact_connected"] = decomp.well_compact_connected;
    j["well_sea_disjoint"] = decomp.well_sea_disjoint;
    j["S0"] = S0;
    if (geodesics) {
        j["geodesic_count"] = geodesics->geodesics.size();
        j["finite_geodesic_set"] = geodesics->finite_count;
        j["t1"] = pts(geodesics->t1);
        j["u_touch"] = pts(geodesics->u_touch);
    }
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_geodesics_json(const GeodesicSet& gs, const std::string& path) {
    nlohmann::ordered_json j;
    j["finite_count"] = gs.finite_count;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& g : gs.geodesics) {
        nlohmann::ordered_json pl = nlohmann::ordered_json::array();
        for (const auto& p : g.points) pl.push_back({p[0], p[1]});
        arr.push_back({{"action", g.action},
                       {"sea_touch", {g.sea_touch[0], g.sea_touch[1]}},
                       {"well_touch", {g.well_touch[0], g.well_touch[1]}},
                       {"points", pl}});
    }
    j["geodesics"] = arr;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
    auto out = open_out(path);
    out << "t,x0,x1,xi0,xi1\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& s = tr.samples[i];
        out << fmt17(tr.times[i]) << ',' << fmt17(s.x[0]) << ',' << fmt17(s.x[1])
            << ',' << fmt17(s.xi[0]) << ',' << fmt17(s.xi[1]) << '\n';
    }
}

void write_coverage_csv(const CoverageReport& rep, const std::string& path) {
    auto out = open_out(path);
    out << "tube_cells,visited_cells,fraction\n";
    out << rep.tube_cells << ',' << rep.visited_cells << ',' << fmt17(rep.fraction)
        << '\n';
}

void write_eigenvalues_csv(const std::vector<std::pair<Complex, double>>& values,
                           const std::string& path) {
    auto out = open_out(path);
    out << "re,im,theta_drift\n";
    for (const auto& [z, d] : values)
        out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(d) << '\n';
}

}  // namespace reslab
