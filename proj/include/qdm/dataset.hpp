#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace qdm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// N points of dimension d, one per row. `thetas` is a side channel filled by
// the helix generator and used by downstream geometry checks.
struct DataSet {
    Mat points;
    std::vector<std::string> labels; // empty when no label column
    std::string name;
    Vec thetas;

    int n() const { return static_cast<int>(points.rows()); }
    int d() const { return static_cast<int>(points.cols()); }
    bool has_labels() const { return !labels.empty(); }
};

// Points x(theta) = ((R + r cos(w theta)) cos theta,
//                    (R + r cos(w theta)) sin theta,
//                    r sin(w theta))
// for theta on a uniform grid over [0, 2pi). The grid is deterministic; the
// seed is reserved for optional jitter (off by default).
DataSet gen_toroidal_helix(int n, double major_radius, double minor_radius,
                           int windings, unsigned seed = 0);

// Comma-separated UTF-8 input, header auto-detected by a non-numeric first
// row. `zscore` standardizes each feature column to zero mean / unit variance.
DataSet load_csv(const std::string& path, const std::vector<int>& feature_columns,
                 std::optional<int> label_column = std::nullopt, bool zscore = false);

// Divides every point by sqrt(sigma), so the unit-bandwidth kernel of the
// output equals the sigma-bandwidth kernel of the input.
DataSet scale_by_bandwidth(const DataSet& X, double sigma);

} // namespace qdm
