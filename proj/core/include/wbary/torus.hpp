#pragma once

#include <cmath>

// Geometry of the flat unit torus [0,1)^2 with the quotient metric.

namespace wbary {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

// Wrap a coordinate difference to its minimal representative in [-1/2, 1/2).
// At the cut-locus tie |t| = 1/2 the representative -1/2 is chosen, which is
// the lexicographically smallest displacement; this keeps downstream
// computations deterministic.
inline double wrap_half(double t) {
    double r = t - std::floor(t + 0.5);
    if (r >= 0.5) r -= 1.0;
    return r;
}

// Reduce a point to its canonical representative in [0,1)^2.
inline double wrap_unit(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;
    if (r < 0.0) r += 1.0;
    return r;
}

inline Vec2 torus_wrap(const Vec2& p) { return {wrap_unit(p.x), wrap_unit(p.y)}; }

// Minimal displacement a - b on the torus.
inline Vec2 torus_disp(const Vec2& a, const Vec2& b) {
    return {wrap_half(a.x - b.x), wrap_half(a.y - b.y)};
}

// Geodesic distance on the flat torus; bounded by sqrt(2)/2.
inline double torus_dist(const Vec2& a, const Vec2& b) {
    return torus_disp(a, b).norm();
}

}  // namespace wbary
