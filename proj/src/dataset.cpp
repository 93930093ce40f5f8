#include "qdm/dataset.hpp"
#include "qdm/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qdm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

DataSet gen_toroidal_helix(int n, double major_radius, double minor_radius,
                           int windings, unsigned /*seed*/) {
    if (n < 4) throw ParameterError("dataset.gen_toroidal_helix", "need n >= 4");
    if (major_radius <= 0.0) throw ParameterError("dataset.gen_toroidal_helix", "major radius must be > 0");
    if (minor_radius < 0.0) throw ParameterError("dataset.gen_toroidal_helix", "minor radius must be >= 0");
    if (windings < 1) throw ParameterError("dataset.gen_toroidal_helix", "windings must be >= 1");

    DataSet ds;
    ds.name = "toroidal_helix";
    ds.points.resize(n, 3);
    ds.thetas.resize(n);
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        const double ring = major_radius + minor_radius * std::cos(windings * theta);
        ds.points(i, 0) = ring * std::cos(theta);
        ds.points(i, 1) = ring * std::sin(theta);
        ds.points(i, 2) = minor_radius * std::sin(windings * theta);
        ds.thetas(i) = theta;
    }
    return ds;
}

DataSet load_csv(const std::string& path, const std::vector<int>& feature_columns,
                 std::optional<int> label_column, bool zscore) {
    if (feature_columns.empty())
        throw ParameterError("dataset.load_csv", "no feature columns given");
    std::ifstream in(path);
    if (!in) throw IngestError("dataset.load_csv", "cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_row(line));
    }
    if (rows.empty()) throw IngestError("dataset.load_csv", "'" + path + "' has no data rows");

    // Header detection: first row counts as header when any feature cell is
    // non-numeric.
    std::size_t first_data = 0;
    {
        double tmp;
        for (int c : feature_columns) {
            if (c < 0 || c >= static_cast<int>(rows[0].size()) || !parse_double(rows[0][c], tmp)) {
                first_data = 1;
                break;
            }
        }
    }
    const std::size_t n_rows = rows.size() - first_data;
    if (n_rows < 2) throw IngestError("dataset.load_csv", "'" + path + "' needs at least 2 data rows");

    DataSet ds;
    ds.name = path;
    ds.points.resize(static_cast<int>(n_rows), static_cast<int>(feature_columns.size()));
    for (std::size_t r = 0; r < n_rows; ++r) {
        const auto& cells = rows[r + first_data];
        const std::string loc = "row " + std::to_string(r + first_data + 1);
        for (std::size_t f = 0; f < feature_columns.size(); ++f) {
            const int c = feature_columns[f];
            if (c < 0 || c >= static_cast<int>(cells.size()))
                throw IngestError("dataset.load_csv",
                                  loc + " is missing column " + std::to_string(c));
            double value;
            if (!parse_double(cells[c], value))
                throw IngestError("dataset.load_csv", "non-numeric cell at " + loc +
                                                          ", column " + std::to_string(c) +
                                                          ": '" + cells[c] + "'");
            ds.points(static_cast<int>(r), static_cast<int>(f)) = value;
        }
        if (label_column) {
            const int c = *label_column;
            if (c < 0 || c >= static_cast<int>(cells.size()))
                throw IngestError("dataset.load_csv",
                                  loc + " is missing label column " + std::to_string(c));
            ds.labels.push_back(cells[c]);
        }
    }

    if (zscore) {
        for (int c = 0; c < ds.points.cols(); ++c) {
            const double mean = ds.points.col(c).mean();
            double var = (ds.points.col(c).array() - mean).square().sum() / ds.points.rows();
            const double sd = std::sqrt(var);
            ds.points.col(c).array() -= mean;
            if (sd > 0.0) ds.points.col(c) /= sd;
        }
    }
    return ds;
}

DataSet scale_by_bandwidth(const DataSet& X, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("dataset.scale_by_bandwidth", "sigma must be > 0");
    DataSet out = X;
    out.points /= std::sqrt(sigma);
    return out;
}

} // namespace qdm
