#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>

namespace scalarmc {

// 2D point / vector with plain value semantics.
struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
    friend Vec2 operator*(Vec2 a, double s) { return s * a; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x1 == b.x1 && a.x2 == b.x2; }

    double dot(Vec2 o) const { return x1 * o.x1 + x2 * o.x2; }
    double norm() const { return std::hypot(x1, x2); }
    double norm_sq() const { return x1 * x1 + x2 * x2; }
    bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
};

using Point2 = Vec2;

struct BoundaryHit {
    Point2 point;     // crossing point on the boundary
    double fraction;  // parameter in [0,1] along the inside->outside segment
};

// Spatial domain: periodic unit torus, axis-aligned box, or disk.
// Immutable after construction.
class Domain {
public:
    static Domain unit_torus();
    static Domain box(Point2 lower, Point2 upper);
    static Domain disk(Point2 center, double radius);

    bool is_periodic() const { return std::holds_alternative<Torus>(shape_); }
    bool is_bounded() const { return !is_periodic(); }

    // True for strictly interior points (always true on the torus).
    bool contains(Point2 x) const;

    // Periodic image in [0,1)^2; identity for bounded domains.
    Point2 wrap(Point2 x) const;

    double diameter() const;

    // Crossing point of the segment inside->outside with the boundary.
    // Requires contains(inside) and !contains(outside).
    BoundaryHit boundary_exit(Point2 inside, Point2 outside) const;

    struct Torus {};
    struct Box {
        Point2 lower, upper;
    };
    struct Disk {
        Point2 center;
        double radius;
    };

    const Box* as_box() const { return std::get_if<Box>(&shape_); }
    const Disk* as_disk() const { return std::get_if<Disk>(&shape_); }

    friend bool operator==(const Domain& a, const Domain& b);

private:
    explicit Domain(std::variant<Torus, Box, Disk> shape) : shape_(std::move(shape)) {}
    std::variant<Torus, Box, Disk> shape_;
};

}  // namespace scalarmc
