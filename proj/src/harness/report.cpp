#include "contam/harness/report.hpp"

#include "contam/core/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace contam::harness {
namespace fs = std::filesystem;
namespace {

constexpr const char* kCsvHeader = "kind,epsilon,mean_loss,stderr,bound_2class,bound_multiclass,n_instances";

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

double parse_double(const std::string& s, std::size_t line) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("report CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

}  // namespace

std::string format_double(double v) { return fmt("%.17g", v); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string report_csv(const ExperimentReport& report) {
    std::string s = std::string(kCsvHeader) + "\n";
    for (const auto& c : report.cells) {
        s += contamination::to_string(c.kind) + "," + format_double(c.epsilon) + "," + format_double(c.mean_loss) +
             "," + format_double(c.stderr_loss) + "," + format_double(c.bound_2class) + "," +
             (c.bound_multiclass ? format_double(*c.bound_multiclass) : std::string()) + "," +
             std::to_string(c.n_instances) + "\n";
    }
    return s;
}

std::vector<ReportRow> parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw SchemaError("report CSV header mismatch");
    std::vector<ReportRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t end; (end = line.find(',', start)) != std::string::npos; start = end + 1) {
            f.push_back(line.substr(start, end - start));
        }
        f.push_back(line.substr(start));
        if (f.size() != 7) throw SchemaError("report CSV line " + std::to_string(n) + ": expected 7 fields");
        ReportRow r;
        r.kind = f[0];
        r.epsilon = parse_double(f[1], n);
        r.mean_loss = parse_double(f[2], n);
        r.stderr_loss = parse_double(f[3], n);
        r.bound_2class = parse_double(f[4], n);
        if (!f[5].empty()) r.bound_multiclass = parse_double(f[5], n);
        r.n_instances = static_cast<std::size_t>(parse_double(f[6], n));
        rows.push_back(r);
    }
    return rows;
}

std::vector<ReportRow> read_report_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_report_csv(ss.str());
}

std::string report_svg(const ExperimentReport& report) {
    if (report.cells.empty()) throw DomainError("nothing to plot");
    const double W = 640, H = 420, left = 70, right = 150, top = 30, bottom = 55;
    const double pw = W - left - right, ph = H - top - bottom;

    std::vector<std::string> kinds;
    std::map<std::string, std::vector<std::pair<double, double>>> loss;
    std::map<double, double> bound2, boundm;
    double xmax = 0, ymin = 0, ymax = 0;
    for (const auto& c : report.cells) {
        const auto k = contamination::to_string(c.kind);
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
        loss[k].emplace_back(c.epsilon, c.mean_loss);
        bound2[c.epsilon] = c.bound_2class;
        if (c.bound_multiclass) boundm[c.epsilon] = *c.bound_multiclass;
        xmax = std::max(xmax, c.epsilon);
        ymin = std::min(ymin, c.mean_loss);
        ymax = std::max({ymax, c.mean_loss, c.bound_2class, c.bound_multiclass.value_or(0.0)});
    }
    if (xmax <= 0) xmax = 1e-3;
    if (ymax <= ymin) ymax = ymin + 1e-3;
    ymax *= 1.05;
    auto X = [&](double x) { return left + pw * x / xmax; };
    auto Y = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmax * t / 5.0, yv = ymin + (ymax - ymin) * t / 5.0;
        s << "<text x=\"" << fmt("%.2f", X(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << fmt("%.3g", xv) << "</text>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << fmt("%.2f", Y(yv) + 4) << "\" text-anchor=\"end\">"
          << fmt("%.3g", yv) << "</text>\n";
    }
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">epsilon</text>\n";
    s << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">loss in error rate</text>\n";

    auto series = [&](const std::vector<std::pair<double, double>>& pts, const std::string& colour, bool dashed,
                      const std::string& name, std::size_t slot) {
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\""
          << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            s << (i ? " " : "") << fmt("%.2f", X(pts[i].first)) << ',' << fmt("%.2f", Y(pts[i].second));
        }
        s << "\"/>\n";
        for (const auto& [x, y] : pts) {
            s << "<circle cx=\"" << fmt("%.2f", X(x)) << "\" cy=\"" << fmt("%.2f", Y(y)) << "\" r=\"3\" fill=\""
              << colour << "\"/>\n";
        }
        const double ly = top + 14 + 18.0 * static_cast<double>(slot);
        s << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
          << "\" stroke=\"" << colour << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
          << "/>\n";
        s << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << name << "</text>\n";
    };
    std::size_t slot = 0;
    series({bound2.begin(), bound2.end()}, "black", true, "two-class bound", slot++);
    if (!boundm.empty()) series({boundm.begin(), boundm.end()}, "#555555", true, "multi-class bound", slot++);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto pts = loss[kinds[k]];
        std::sort(pts.begin(), pts.end());
        series(pts, kPalette[k % std::size(kPalette)], false, kinds[k], slot++);
    }
    s << "</svg>\n";
    return s.str();
}

std::vector<fs::path> emit_report(const ExperimentReport& report, const std::set<ReportFormat>& formats,
                                  const fs::path& out_dir) {
    if (report.cells.empty()) throw DomainError("nothing to plot");
    ensure_dir(out_dir);
    std::vector<fs::path> written;
    if (formats.count(ReportFormat::csv)) {
        write_text(out_dir / "report.csv", report_csv(report));
        written.push_back(out_dir / "report.csv");
    }
    if (formats.count(ReportFormat::svg)) {
        write_text(out_dir / "report.svg", report_svg(report));
        written.push_back(out_dir / "report.svg");
    }
    if (formats.count(ReportFormat::json)) {
        write_text(out_dir / "report.json", report.to_json().dump(2) + "\n");
        written.push_back(out_dir / "report.json");
    }
    return written;
}

std::vector<fs::path> emit_bound_comparison(const std::vector<BoundComparisonRow>& rows, const fs::path& out_dir) {
    if (rows.empty()) throw DomainError("nothing to plot");
    ensure_dir(out_dir);
    std::string csv = "epsilon,two_class_bound,ben_david_bound,ben_david_bound_plot,d_hat,lambda,probe_error\n";
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        const auto& in = *r.bound.ben_david_inputs;
        csv += format_double(r.bound.epsilon) + "," + format_double(r.bound.two_class_bound) + "," +
               format_double(*r.bound.ben_david_bound) + "," +
               format_double(std::min(*r.bound.ben_david_bound, bounds::kBenDavidPlotCeiling)) + "," +
               format_double(in.d_hat) + "," + format_double(in.lambda) + "," + format_double(r.probe_error) + "\n";
        auto row = r.bound.to_json();
        row["probe_error"] = r.probe_error;
        j.push_back(std::move(row));
    }
    write_text(out_dir / "bounds.csv", csv);
    write_text(out_dir / "bounds.json", j.dump(2) + "\n");
    return {out_dir / "bounds.csv", out_dir / "bounds.json"};
}

std::vector<fs::path> emit_misreg_report(const MisregReport& report, const fs::path& out_dir) {
    ensure_dir(out_dir);
    std::string csv = "fold,clean_accuracy,misreg_accuracy\n";
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        csv += std::to_string(f) + "," + format_double(report.folds[f].clean_accuracy) + "," +
               format_double(report.folds[f].misreg_accuracy) + "\n";
    }
    write_text(out_dir / "misreg_folds.csv", csv);
    write_text(out_dir / "misreg.json", report.to_json().dump(2) + "\n");
    return {out_dir / "misreg_folds.csv", out_dir / "misreg.json"};
}

}  // namespace contam::harness
