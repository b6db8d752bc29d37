#pragma once

#include <cstdint>
#include <string>

#include "trajlab/types.hpp"

namespace trajlab {

// Finite point set {y_i} backing the KDE denoiser and densities.
struct Dataset {
    Mat points;  // |I| x d, one point per row

    Dataset() = default;
    explicit Dataset(Mat pts);

    int count() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }

    Vec mean() const { return points.colwise().mean(); }
    Vec coord_min() const { return points.colwise().minCoeff(); }
    Vec coord_max() const { return points.colwise().maxCoeff(); }
};

// CSV: one point per row, comma-separated decimal floats, no header.
// Dimension is inferred from the first row; all rows must match.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& data, const std::string& path);

// Synthetic presets used by the CLI and the verification fixtures.

// Point set around `modes` random centers in [-1,1]^d, coordinates clamped
// to [-1,1].
Dataset make_gmm_dataset(int modes, int d, int count, double spread, std::uint64_t seed);

// Points on a random m-dimensional linear subspace embedded in R^d.
Dataset make_plane_dataset(int m, int d, int count, std::uint64_t seed);

// Random corners of the hypercube {-1,1}^d.
Dataset make_hypercube_corner_dataset(int d, int count, std::uint64_t seed);

}  // namespace trajlab
