#include "wardtrack/stn.hpp"

#include <cmath>

#include "wardtrack/errors.hpp"

namespace wardtrack {

FeatureMap FeatureMap::zeros(int h, int w, int c) {
    FeatureMap m;
    m.h = h;
    m.w = w;
    m.c = c;
    m.data.assign(static_cast<size_t>(h) * w * c, 0.0);
    return m;
}

AffineParams compose(const AffineParams& outer, const AffineParams& inner) {
    const auto& a = outer.v;
    const auto& b = inner.v;
    AffineParams r;
    r.v[0] = a[0] * b[0] + a[1] * b[3];
    r.v[1] = a[0] * b[1] + a[1] * b[4];
    r.v[2] = a[0] * b[2] + a[1] * b[5] + a[2];
    r.v[3] = a[3] * b[0] + a[4] * b[3];
    r.v[4] = a[3] * b[1] + a[4] * b[4];
    r.v[5] = a[3] * b[2] + a[4] * b[5] + a[5];
    return r;
}

namespace {

// Center of pixel i on an axis with n pixels, in [-1, 1].
inline double pixel_coord(int i, int n) { return -1.0 + (2.0 * i + 1.0) / n; }

// Inverse of pixel_coord as a continuous map.
inline double to_pixel(double coord, int n) { return (n * (coord + 1.0) - 1.0) / 2.0; }

} // namespace

SamplingGrid generate_grid(const AffineParams& theta, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw DataError("sampling grid must be at least 1x1");
    SamplingGrid g;
    g.h = out_h;
    g.w = out_w;
    g.xs.resize(static_cast<size_t>(out_h) * out_w);
    g.ys.resize(g.xs.size());
    const auto& v = theta.v;
    for (int i = 0; i < out_h; ++i) {
        double yt = pixel_coord(i, out_h);
        for (int j = 0; j < out_w; ++j) {
            double xt = pixel_coord(j, out_w);
            size_t k = static_cast<size_t>(i) * out_w + j;
            g.xs[k] = v[0] * xt + v[1] * yt + v[2];
            g.ys[k] = v[3] * xt + v[4] * yt + v[5];
        }
    }
    return g;
}

FeatureMap sample(const FeatureMap& U, const SamplingGrid& grid) {
    FeatureMap V = FeatureMap::zeros(grid.h, grid.w, U.c);
    for (int i = 0; i < grid.h; ++i) {
        for (int j = 0; j < grid.w; ++j) {
            size_t k = static_cast<size_t>(i) * grid.w + j;
            double xs = to_pixel(grid.xs[k], U.w);
            double ys = to_pixel(grid.ys[k], U.h);
            int x0 = static_cast<int>(std::floor(xs));
            int y0 = static_cast<int>(std::floor(ys));
            for (int dy = 0; dy <= 1; ++dy) {
                int yy = y0 + dy;
                if (yy < 0 || yy >= U.h) continue;
                double wy = 1.0 - std::abs(ys - yy);
                if (wy <= 0.0) continue;
                for (int dx = 0; dx <= 1; ++dx) {
                    int xx = x0 + dx;
                    if (xx < 0 || xx >= U.w) continue;
                    double wx = 1.0 - std::abs(xs - xx);
                    if (wx <= 0.0) continue;
                    for (int ch = 0; ch < U.c; ++ch)
                        V.at(i, j, ch) += U.at(yy, xx, ch) * wx * wy;
                }
            }
        }
    }
    return V;
}

SampleGrad sample_grad(const FeatureMap& U, const SamplingGrid& grid,
                       const FeatureMap& upstream) {
    if (upstream.h != grid.h || upstream.w != grid.w || upstream.c != U.c)
        throw DataError("upstream gradient shape does not match the sampling output");

    SampleGrad out;
    out.d_input = FeatureMap::zeros(U.h, U.w, U.c);
    out.d_theta.v = {0, 0, 0, 0, 0, 0};

    for (int i = 0; i < grid.h; ++i) {
        double yt = pixel_coord(i, grid.h);
        for (int j = 0; j < grid.w; ++j) {
            double xt = pixel_coord(j, grid.w);
            size_t k = static_cast<size_t>(i) * grid.w + j;
            double xs = to_pixel(grid.xs[k], U.w);
            double ys = to_pixel(grid.ys[k], U.h);
            int x0 = static_cast<int>(std::floor(xs));
            int y0 = static_cast<int>(std::floor(ys));

            double dL_dxs = 0.0; // in pixel units
            double dL_dys = 0.0;
            for (int dy = 0; dy <= 1; ++dy) {
                int yy = y0 + dy;
                if (yy < 0 || yy >= U.h) continue;
                double wy = 1.0 - std::abs(ys - yy);
                if (wy <= 0.0) continue;
                double sy = (yy >= ys) ? 1.0 : -1.0; // d wy / d ys
                for (int dx = 0; dx <= 1; ++dx) {
                    int xx = x0 + dx;
                    if (xx < 0 || xx >= U.w) continue;
                    double wx = 1.0 - std::abs(xs - xx);
                    if (wx <= 0.0) continue;
                    double sx = (xx >= xs) ? 1.0 : -1.0;
                    for (int ch = 0; ch < U.c; ++ch) {
                        double up = upstream.at(i, j, ch);
                        double u = U.at(yy, xx, ch);
                        out.d_input.at(yy, xx, ch) += up * wx * wy;
                        dL_dxs += up * u * sx * wy;
                        dL_dys += up * u * wx * sy;
                    }
                }
            }
            // Chain through the normalized-to-pixel map: d xs / d x_norm = W/2.
            double dL_dxn = dL_dxs * (U.w / 2.0);
            double dL_dyn = dL_dys * (U.h / 2.0);
            out.d_theta.v[0] += dL_dxn * xt;
            out.d_theta.v[1] += dL_dxn * yt;
            out.d_theta.v[2] += dL_dxn;
            out.d_theta.v[3] += dL_dyn * xt;
            out.d_theta.v[4] += dL_dyn * yt;
            out.d_theta.v[5] += dL_dyn;
        }
    }
    return out;
}

} // namespace wardtrack
