#include "skg/output.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skg/kernels.hpp"

namespace skg {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvBuilder::CsvBuilder(std::string header) : buf_(std::move(header)) { buf_ += '\n'; }

void CsvBuilder::cell(double v) { cell(fmt_g17(v)); }

void CsvBuilder::cell(std::size_t v) { cell(std::to_string(v)); }

void CsvBuilder::cell(const std::string& v) {
    if (row_open_) buf_ += ',';
    buf_ += v;
    row_open_ = true;
}

void CsvBuilder::end_row() {
    buf_ += '\n';
    row_open_ = false;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericError("output: cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw NumericError("output: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string versions_json() {
    nlohmann::json j;
    j["skg"] = "0.1.0";
    j["fftw"] = std::string(fftw_version);
    j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    j["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    j["kernels"] = kernels::backend_name();
    return j.dump();
}

namespace {

struct Rect {
    double x0, x1, y0, y1;
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series) {
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    Rect r{1e300, -1e300, 1e300, -1e300};
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            r.x0 = std::min(r.x0, s.x[i]);
            r.x1 = std::max(r.x1, s.x[i]);
            r.y0 = std::min(r.y0, s.y[i]);
            r.y1 = std::max(r.y1, s.y[i]);
        }
    if (r.x0 > r.x1) r = {0.0, 1.0, 0.0, 1.0};
    if (r.x1 - r.x0 < 1e-300) {
        r.x0 -= 0.5;
        r.x1 += 0.5;
    }
    if (r.y1 - r.y0 < 1e-300) {
        r.y0 -= 0.5;
        r.y1 += 0.5;
    }
    const double px = (W - ml - mr) / (r.x1 - r.x0);
    const double py = (H - mt - mb) / (r.y1 - r.y0);
    const auto X = [&](double x) { return ml + (x - r.x0) * px; };
    const auto Y = [&](double y) { return H - mb - (y - r.y0) * py; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    o << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">"
      << title << "</text>\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = r.x0 + (r.x1 - r.x0) * i / 4.0;
        const double fy = r.y0 + (r.y1 - r.y0) * i / 4.0;
        o << "<line x1=\"" << X(fx) << "\" y1=\"" << H - mb << "\" x2=\"" << X(fx) << "\" y2=\""
          << H - mb + 5 << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << X(fx) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
          << fmt_tick(fx) << "</text>\n";
        o << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << ml << "\" y2=\""
          << Y(fy) << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << ml - 8 << "\" y=\"" << Y(fy) + 4
          << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
          << fmt_tick(fy) << "</text>\n";
    }
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
      << "</text>\n";
    o << "<text x=\"16\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 16 "
      << H / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 6];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            o << X(s.x[i]) << "," << Y(s.y[i]) << " ";
        }
        o << "\"/>\n";
        const double ly = mt + 16 + 16 * static_cast<double>(si);
        o << "<line x1=\"" << W - mr - 110 << "\" y1=\"" << ly << "\" x2=\"" << W - mr - 90
          << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - mr - 84 << "\" y=\"" << ly + 4
          << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace skg
