#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amphibsim {

// One logged control instant.  Angles are degrees in the log (everything
// else SI); omega/rho have one entry per planar unit (2D) or rotor (3D).
struct TrajectoryRow {
    double t = 0.0;
    double X = 0.0;
    double Y = 0.0;  // written only when the record carries Y
    double Z = 0.0;
    double theta_deg = 0.0;
    double theta_dot = 0.0;  // [rad/s]
    std::vector<double> omega;
    std::vector<double> rho;
    int stage = 0;
    unsigned cut_mask = 0;
    bool shortfall = false;
};

struct TrajectoryRecord {
    int n_rotors = 4;    // omega_/rho_ column count
    bool has_y = false;  // 3D records include Y
    std::vector<TrajectoryRow> rows;

    // Column order of the serialized forms:
    // t, X[, Y], Z, theta_deg, theta_dot, omega_1..n, rho_1..n, stage,
    // cut_mask, shortfall.
    std::vector<std::string> column_names() const;
};

// Round-trip-exact decimal rendering of a double (shortest form).
std::string format_double(double v);

// CSV with a header row; numbers render round-trip exact.
void write_csv(const TrajectoryRecord& rec, std::ostream& out);
void write_csv_file(const TrajectoryRecord& rec, const std::string& path);

// JSON lines: one object per row, keys = column names.
void write_jsonl(const TrajectoryRecord& rec, std::ostream& out);
void write_jsonl_file(const TrajectoryRecord& rec, const std::string& path);

// Strict CSV reader for files produced by write_csv; the header determines
// the rotor count and whether Y is present.  Throws ValidationError on any
// schema or number mismatch.
TrajectoryRecord read_csv(std::istream& in);
TrajectoryRecord read_csv_file(const std::string& path);

// Plot-ready decomposition: two-column (t, value) series files plus simple
// SVG line charts rendered from them.  Writes into dir (created if needed):
//   rotor_speed_<i>.csv  one per omega column      rotor_speeds.svg
//   x.csv, z.csv, theta.csv                        x.svg, z.svg, theta.svg
// An empty record writes empty series files and no SVGs.  Returns the list
// of files written (relative to dir).
std::vector<std::string> write_plot_data(const TrajectoryRecord& rec,
                                         const std::string& dir);

}  // namespace amphibsim
