#include "trajlab/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "trajlab/rng.hpp"

namespace trajlab {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Dataset::Dataset(Mat pts) : points(std::move(pts)) {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::domain_error("Dataset: need at least one point and one dimension");
    if (!points.allFinite())
        throw std::domain_error("Dataset: non-finite entries");
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    int expected_dim = -1;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v = std::stod(cell, &pos);
            row.push_back(v);
        }
        if (expected_dim < 0) expected_dim = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != expected_dim)
            throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                                     " has " + std::to_string(row.size()) +
                                     " columns, expected " + std::to_string(expected_dim));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty dataset");

    Mat pts(rows.size(), expected_dim);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < expected_dim; ++j) pts(static_cast<Eigen::Index>(i), j) = rows[i][j];
    return Dataset(std::move(pts));
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    for (int i = 0; i < data.count(); ++i) {
        for (int j = 0; j < data.dim(); ++j) {
            if (j) out << ',';
            out << format_double(data.points(i, j));
        }
        out << '\n';
    }
}

Dataset make_gmm_dataset(int modes, int d, int count, double spread, std::uint64_t seed) {
    if (modes < 1 || d < 1 || count < modes)
        throw std::domain_error("make_gmm_dataset: invalid shape");
    RngStream rng(mix_seed(seed, 0x676d6d));
    Mat centers(modes, d);
    for (int m = 0; m < modes; ++m)
        for (int j = 0; j < d; ++j) centers(m, j) = 1.5 * rng.uniform() - 0.75;

    Mat pts(count, d);
    for (int i = 0; i < count; ++i) {
        const int m = i % modes;
        for (int j = 0; j < d; ++j) {
            double v = centers(m, j) + spread * rng.gaussian();
            pts(i, j) = std::clamp(v, -1.0, 1.0);
        }
    }
    return Dataset(std::move(pts));
}

Dataset make_plane_dataset(int m, int d, int count, std::uint64_t seed) {
    if (m < 1 || m > d) throw std::domain_error("make_plane_dataset: need 1 <= m <= d");
    RngStream rng(mix_seed(seed, 0x706c6e));
    // Orthonormal basis of a random m-dim subspace via Gram-Schmidt.
    Mat basis(d, m);
    for (int c = 0; c < m; ++c) {
        Vec v = rng.gaussian_vector(d);
        for (int p = 0; p < c; ++p) v -= basis.col(p).dot(v) * basis.col(p);
        basis.col(c) = v / v.norm();
    }
    Mat pts(count, d);
    for (int i = 0; i < count; ++i) {
        Vec w(m);
        for (int j = 0; j < m; ++j) w[j] = 2.0 * rng.uniform() - 1.0;
        pts.row(i) = (basis * w).transpose();
    }
    return Dataset(std::move(pts));
}

Dataset make_hypercube_corner_dataset(int d, int count, std::uint64_t seed) {
    if (d < 1 || count < 1) throw std::domain_error("make_hypercube_corner_dataset: invalid shape");
    RngStream rng(mix_seed(seed, 0x636f72));
    Mat pts(count, d);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return Dataset(std::move(pts));
}

}  // namespace trajlab
