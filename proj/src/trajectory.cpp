#include "amphibsim/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

double parse_number(std::string_view s, const std::string& where) {
    double out = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ValidationError(where + ": expected a number, got '" + std::string(s) + "'");
    return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    return out;
}

void append_row_values(const TrajectoryRecord& rec, const TrajectoryRow& r,
                       std::vector<std::string>& out) {
    out.push_back(format_double(r.t));
    out.push_back(format_double(r.X));
    if (rec.has_y) out.push_back(format_double(r.Y));
    out.push_back(format_double(r.Z));
    out.push_back(format_double(r.theta_deg));
    out.push_back(format_double(r.theta_dot));
    for (double w : r.omega) out.push_back(format_double(w));
    for (double rho : r.rho) out.push_back(format_double(rho));
    out.push_back(std::to_string(r.stage));
    out.push_back(std::to_string(r.cut_mask));
    out.push_back(r.shortfall ? "1" : "0");
}

void check_row_shape(const TrajectoryRecord& rec, const TrajectoryRow& r,
                     std::size_t index) {
    if (static_cast<int>(r.omega.size()) != rec.n_rotors ||
        static_cast<int>(r.rho.size()) != rec.n_rotors)
        throw ValidationError("trajectory row " + std::to_string(index) +
                              ": omega/rho length does not match n_rotors");
}

// Minimal single-panel SVG line chart.
class LineChart {
  public:
    LineChart(std::string title, std::string y_label)
        : title_(std::move(title)), y_label_(std::move(y_label)) {}

    void add_series(const std::vector<double>& t, const std::vector<double>& v) {
        series_t_.push_back(t);
        series_v_.push_back(v);
        for (double x : t) {
            t_min_ = std::min(t_min_, x);
            t_max_ = std::max(t_max_, x);
        }
        for (double y : v) {
            v_min_ = std::min(v_min_, y);
            v_max_ = std::max(v_max_, y);
        }
    }

    void render(std::ostream& out) const {
        constexpr double W = 720, H = 420;
        constexpr double L = 64, R = 16, T = 36, B = 44;
        double t_lo = t_min_, t_hi = t_max_, v_lo = v_min_, v_hi = v_max_;
        if (!(t_hi > t_lo)) t_hi = t_lo + 1.0;
        if (!(v_hi > v_lo)) {
            v_lo -= 1.0;
            v_hi += 1.0;
        }
        const double pad = 0.05 * (v_hi - v_lo);
        v_lo -= pad;
        v_hi += pad;
        auto px = [&](double t) { return L + (t - t_lo) / (t_hi - t_lo) * (W - L - R); };
        auto py = [&](double v) { return H - B - (v - v_lo) / (v_hi - v_lo) * (H - T - B); };

        static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                       "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
            << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
        out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << title_ << "</text>\n";
        // axes
        out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
            << H - B << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
            << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
        auto tick_label = [&](double x, double y, const std::string& s,
                              const char* anchor) {
            out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << s << "</text>\n";
        };
        tick_label(L, H - B + 16, format_double(t_lo), "middle");
        tick_label(W - R, H - B + 16, format_double(t_hi), "middle");
        tick_label(L - 6, H - B + 4, format_double(v_lo), "end");
        tick_label(L - 6, T + 4, format_double(v_hi), "end");
        tick_label((L + W - R) / 2, H - 10, "time [s]", "middle");
        out << "<text x=\"14\" y=\"" << (T + H - B) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 14 " << (T + H - B) / 2 << ")\">" << y_label_
            << "</text>\n";

        for (std::size_t s = 0; s < series_t_.size(); ++s) {
            out << "<polyline fill=\"none\" stroke=\"" << colors[s % 8]
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < series_t_[s].size(); ++i) {
                if (i) out << ' ';
                out << px(series_t_[s][i]) << ',' << py(series_v_[s][i]);
            }
            out << "\"/>\n";
        }
        out << "</svg>\n";
    }

  private:
    std::string title_, y_label_;
    std::vector<std::vector<double>> series_t_, series_v_;
    double t_min_ = std::numeric_limits<double>::infinity();
    double t_max_ = -std::numeric_limits<double>::infinity();
    double v_min_ = std::numeric_limits<double>::infinity();
    double v_max_ = -std::numeric_limits<double>::infinity();
};

void write_series(const std::string& path, const std::vector<double>& t,
                  const std::vector<double>& v) {
    std::ofstream out = open_for_write(path);
    for (std::size_t i = 0; i < t.size(); ++i)
        out << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) throw ValidationError("format_double: value must be finite");
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> TrajectoryRecord::column_names() const {
    std::vector<std::string> cols = {"t", "X"};
    if (has_y) cols.push_back("Y");
    cols.push_back("Z");
    cols.push_back("theta_deg");
    cols.push_back("theta_dot");
    for (int i = 1; i <= n_rotors; ++i) cols.push_back("omega_" + std::to_string(i));
    for (int i = 1; i <= n_rotors; ++i) cols.push_back("rho_" + std::to_string(i));
    cols.push_back("stage");
    cols.push_back("cut_mask");
    cols.push_back("shortfall");
    return cols;
}

void write_csv(const TrajectoryRecord& rec, std::ostream& out) {
    const std::vector<std::string> cols = rec.column_names();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    std::vector<std::string> vals;
    for (std::size_t r = 0; r < rec.rows.size(); ++r) {
        check_row_shape(rec, rec.rows[r], r);
        vals.clear();
        append_row_values(rec, rec.rows[r], vals);
        for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << vals[i];
        out << '\n';
    }
}

void write_csv_file(const TrajectoryRecord& rec, const std::string& path) {
    std::ofstream out = open_for_write(path);
    write_csv(rec, out);
}

void write_jsonl(const TrajectoryRecord& rec, std::ostream& out) {
    const std::vector<std::string> cols = rec.column_names();
    std::vector<std::string> vals;
    for (std::size_t r = 0; r < rec.rows.size(); ++r) {
        check_row_shape(rec, rec.rows[r], r);
        vals.clear();
        append_row_values(rec, rec.rows[r], vals);
        out << '{';
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ',';
            out << '"' << cols[i] << "\":" << vals[i];
        }
        out << "}\n";
    }
}

void write_jsonl_file(const TrajectoryRecord& rec, const std::string& path) {
    std::ofstream out = open_for_write(path);
    write_jsonl(rec, out);
}

TrajectoryRecord read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("trajectory csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string_view> header = split(line, ',');

    TrajectoryRecord rec;
    rec.has_y = header.size() > 2 && header[2] == "Y";
    int n_rotors = 0;
    for (const std::string_view& h : header)
        if (h.starts_with("omega_")) ++n_rotors;
    rec.n_rotors = n_rotors;

    const std::vector<std::string> expected = rec.column_names();
    if (header.size() != expected.size())
        throw ValidationError("trajectory csv: header has " +
                              std::to_string(header.size()) + " columns, expected " +
                              std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (header[i] != expected[i])
            throw ValidationError("trajectory csv: column " + std::to_string(i + 1) +
                                  " is '" + std::string(header[i]) + "', expected '" +
                                  expected[i] + "'");
    }

    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string_view> f = split(line, ',');
        const std::string where = "trajectory csv row " + std::to_string(row_no);
        if (f.size() != expected.size())
            throw ValidationError(where + ": has " + std::to_string(f.size()) +
                                  " fields, expected " + std::to_string(expected.size()));
        TrajectoryRow r;
        std::size_t i = 0;
        r.t = parse_number(f[i++], where);
        r.X = parse_number(f[i++], where);
        if (rec.has_y) r.Y = parse_number(f[i++], where);
        r.Z = parse_number(f[i++], where);
        r.theta_deg = parse_number(f[i++], where);
        r.theta_dot = parse_number(f[i++], where);
        r.omega.resize(static_cast<std::size_t>(rec.n_rotors));
        for (double& w : r.omega) w = parse_number(f[i++], where);
        r.rho.resize(static_cast<std::size_t>(rec.n_rotors));
        for (double& rho : r.rho) rho = parse_number(f[i++], where);
        r.stage = static_cast<int>(parse_number(f[i++], where));
        r.cut_mask = static_cast<unsigned>(parse_number(f[i++], where));
        r.shortfall = parse_number(f[i++], where) != 0.0;
        rec.rows.push_back(std::move(r));
    }
    return rec;
}

TrajectoryRecord read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open trajectory csv '" + path + "'");
    return read_csv(in);
}

std::vector<std::string> write_plot_data(const TrajectoryRecord& rec,
                                         const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create directory '" + dir + "': " + ec.message());

    std::vector<std::string> written;
    std::vector<double> t;
    t.reserve(rec.rows.size());
    for (std::size_t r = 0; r < rec.rows.size(); ++r) {
        check_row_shape(rec, rec.rows[r], r);
        t.push_back(rec.rows[r].t);
    }

    auto column = [&](auto&& get) {
        std::vector<double> v;
        v.reserve(rec.rows.size());
        for (const TrajectoryRow& r : rec.rows) v.push_back(get(r));
        return v;
    };

    const std::vector<double> x = column([](const TrajectoryRow& r) { return r.X; });
    const std::vector<double> z = column([](const TrajectoryRow& r) { return r.Z; });
    const std::vector<double> th =
        column([](const TrajectoryRow& r) { return r.theta_deg; });

    std::vector<std::vector<double>> speeds;
    for (int i = 0; i < rec.n_rotors; ++i)
        speeds.push_back(column(
            [i](const TrajectoryRow& r) { return r.omega[static_cast<std::size_t>(i)]; }));

    auto emit_series = [&](const std::string& name, const std::vector<double>& v) {
        write_series(dir + "/" + name, t, v);
        written.push_back(name);
    };
    for (int i = 0; i < rec.n_rotors; ++i)
        emit_series("rotor_speed_" + std::to_string(i + 1) + ".csv",
                    speeds[static_cast<std::size_t>(i)]);
    emit_series("x.csv", x);
    emit_series("z.csv", z);
    emit_series("theta.csv", th);

    if (rec.rows.empty()) return written;  // nothing to draw

    auto emit_chart = [&](const std::string& name, LineChart& chart) {
        std::ofstream out = open_for_write(dir + "/" + name);
        chart.render(out);
        written.push_back(name);
    };
    {
        LineChart chart("rotor speeds", "omega [rad/s]");
        for (const auto& s : speeds) chart.add_series(t, s);
        emit_chart("rotor_speeds.svg", chart);
    }
    {
        LineChart chart("horizontal position", "X [m]");
        chart.add_series(t, x);
        emit_chart("x.svg", chart);
    }
    {
        LineChart chart("vertical position", "Z [m]");
        chart.add_series(t, z);
        emit_chart("z.svg", chart);
    }
    {
        LineChart chart("pitch", "theta [deg]");
        chart.add_series(t, th);
        emit_chart("theta.svg", chart);
    }
    return written;
}

}  // namespace amphibsim
