#include "wardtrack/image.hpp"

#include <numeric>

namespace wardtrack {

BinaryImage BinaryImage::zeros(int h, int w) {
    BinaryImage im;
    im.h = h;
    im.w = w;
    im.px.assign(static_cast<size_t>(h) * w, 0);
    return im;
}

int BinaryImage::count() const {
    return std::accumulate(px.begin(), px.end(), 0);
}

void BinaryImage::merge(const BinaryImage& o) {
    for (size_t i = 0; i < px.size(); ++i) px[i] |= o.px[i];
}

int xor_count(const BinaryImage& a, const BinaryImage& b) {
    int n = 0;
    for (size_t i = 0; i < a.px.size(); ++i) n += a.px[i] ^ b.px[i];
    return n;
}

} // namespace wardtrack
