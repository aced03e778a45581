#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace wardtrack {

// Row-major H x W x C feature map of doubles.
struct FeatureMap {
    int h = 0;
    int w = 0;
    int c = 1;
    std::vector<double> data;

    static FeatureMap zeros(int h, int w, int c = 1);

    double at(int y, int x, int ch = 0) const {
        return data[(static_cast<size_t>(y) * w + x) * c + ch];
    }
    double& at(int y, int x, int ch = 0) {
        return data[(static_cast<size_t>(y) * w + x) * c + ch];
    }
    bool same_shape(const FeatureMap& o) const {
        return h == o.h && w == o.w && c == o.c;
    }
};

// 2x3 affine map in normalized coordinates:
//   [x_s]   [t1 t2 t3] [x_t]
//   [y_s] = [t4 t5 t6] [y_t]
//                       [ 1 ]
// Layout mirrors (scale_x, shear_x, tx, shear_y, scale_y, ty).
struct AffineParams {
    std::array<double, 6> v{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

    static AffineParams identity() { return {}; }
    double det() const { return v[0] * v[4] - v[1] * v[3]; }
    bool invertible(double delta_min) const { return std::abs(det()) > delta_min; }
    bool operator==(const AffineParams&) const = default;
};

// First apply `inner`, then `outer` (matrix product of the 3x3 extensions).
AffineParams compose(const AffineParams& outer, const AffineParams& inner);

// Source coordinates for each target pixel, in normalized [-1, 1] where
// pixel i of an axis with N pixels sits at -1 + (2i + 1) / N.
struct SamplingGrid {
    int h = 0;
    int w = 0;
    std::vector<double> xs; // h*w, row-major
    std::vector<double> ys;
};

SamplingGrid generate_grid(const AffineParams& theta, int out_h, int out_w);

// Bilinear sampling of U at the grid's source points. Source points outside
// the input contribute zero.
FeatureMap sample(const FeatureMap& U, const SamplingGrid& grid);

// Gradients of sum(upstream * sample(U, grid)) with respect to the input map
// and the six affine parameters. The grid must have been generated from
// theta with generate_grid for d_theta to be meaningful.
struct SampleGrad {
    FeatureMap d_input;
    AffineParams d_theta;
};

SampleGrad sample_grad(const FeatureMap& U, const SamplingGrid& grid,
                       const FeatureMap& upstream);

} // namespace wardtrack
