#ifndef SKG_OUTPUT_HPP
#define SKG_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skg/common.hpp"

namespace skg {

// shortest-exact float formatting ("%.17g", C locale)
std::string fmt_g17(double v);

// csv assembly with a fixed header; cells joined by commas, rows by "\n"
class CsvBuilder {
public:
    explicit CsvBuilder(std::string header);
    void cell(double v);
    void cell(std::size_t v);
    void cell(const std::string& v);
    void end_row();
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
    bool row_open_ = false;
};

// write via temp file + rename so readers never see partial output
void write_text_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// library/version identifiers for run summaries
std::string versions_json();

struct PlotSeries {
    std::string name;
    dvec x, y;
};

// minimal self-contained line plot; log-scaled axes take pre-transformed data
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace skg

#endif
