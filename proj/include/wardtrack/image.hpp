#pragma once

#include <cstdint>
#include <vector>

namespace wardtrack {

// Row-major binary mask; pixel values are 0 or 1.
struct BinaryImage {
    int h = 0;
    int w = 0;
    std::vector<uint8_t> px;

    static BinaryImage zeros(int h, int w);

    uint8_t at(int y, int x) const { return px[static_cast<size_t>(y) * w + x]; }
    uint8_t& at(int y, int x) { return px[static_cast<size_t>(y) * w + x]; }

    int count() const;
    bool any() const { return count() > 0; }
    bool same_shape(const BinaryImage& o) const { return h == o.h && w == o.w; }

    // In-place union; shapes must already match.
    void merge(const BinaryImage& o);

    bool operator==(const BinaryImage&) const = default;
};

// Pixels set in exactly one of a, b.
int xor_count(const BinaryImage& a, const BinaryImage& b);

} // namespace wardtrack
