#include "scalarmc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace scalarmc {

Domain Domain::unit_torus() { return Domain{Torus{}}; }

Domain Domain::box(Point2 lower, Point2 upper) {
    if (!(lower.x1 < upper.x1 && lower.x2 < upper.x2))
        throw std::invalid_argument("Domain::box: lower corner must be strictly below upper");
    return Domain{Box{lower, upper}};
}

Domain Domain::disk(Point2 center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::disk: radius must be positive");
    return Domain{Disk{center, radius}};
}

bool Domain::contains(Point2 x) const {
    if (const auto* b = std::get_if<Box>(&shape_)) {
        return x.x1 > b->lower.x1 && x.x1 < b->upper.x1 && x.x2 > b->lower.x2 &&
               x.x2 < b->upper.x2;
    }
    if (const auto* d = std::get_if<Disk>(&shape_)) {
        return (x - d->center).norm_sq() < d->radius * d->radius;
    }
    return true;  // torus
}

Point2 Domain::wrap(Point2 x) const {
    if (!is_periodic()) return x;
    return {x.x1 - std::floor(x.x1), x.x2 - std::floor(x.x2)};
}

double Domain::diameter() const {
    if (const auto* b = std::get_if<Box>(&shape_)) return (b->upper - b->lower).norm();
    if (const auto* d = std::get_if<Disk>(&shape_)) return 2.0 * d->radius;
    return std::numbers::sqrt2;  // torus: diameter of the fundamental cell
}

namespace {

// Smallest t in [0,1] at which lo + t*(hi - lo) crosses the plane coord = c.
double face_crossing(double from, double to, double c) {
    const double d = to - from;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    const double t = (c - from) / d;
    return (t >= 0.0 && t <= 1.0) ? t : std::numeric_limits<double>::infinity();
}

}  // namespace

BoundaryHit Domain::boundary_exit(Point2 inside, Point2 outside) const {
    if (inside == outside)
        throw std::invalid_argument("boundary_exit: degenerate segment (inside == outside)");
    if (!contains(inside) || contains(outside))
        throw std::invalid_argument("boundary_exit: segment must start inside and end outside");

    if (const auto* b = std::get_if<Box>(&shape_)) {
        const Vec2 d = outside - inside;
        struct Face {
            double t;
            int axis;   // 0 = x1, 1 = x2
            double val; // face coordinate
        };
        Face best{std::numeric_limits<double>::infinity(), -1, 0.0};
        const double faces[2][2] = {{b->lower.x1, b->upper.x1}, {b->lower.x2, b->upper.x2}};
        for (int axis = 0; axis < 2; ++axis) {
            const double from = axis == 0 ? inside.x1 : inside.x2;
            const double to = axis == 0 ? outside.x1 : outside.x2;
            for (double c : faces[axis]) {
                const double t = face_crossing(from, to, c);
                if (t < best.t) best = {t, axis, c};
            }
        }
        if (best.axis < 0)
            throw std::runtime_error("boundary_exit: no face crossing found");
        Point2 p = inside + best.t * d;
        // Snap the crossed coordinate exactly onto the face, clamp the other.
        if (best.axis == 0) {
            p.x1 = best.val;
            p.x2 = std::clamp(p.x2, b->lower.x2, b->upper.x2);
        } else {
            p.x2 = best.val;
            p.x1 = std::clamp(p.x1, b->lower.x1, b->upper.x1);
        }
        return {p, best.t};
    }

    if (const auto* dk = std::get_if<Disk>(&shape_)) {
        // |(inside - c) + t d|^2 = r^2, take the root in [0,1].
        const Vec2 q = inside - dk->center;
        const Vec2 d = outside - inside;
        const double a = d.norm_sq();
        const double bq = 2.0 * q.dot(d);
        const double c = q.norm_sq() - dk->radius * dk->radius;
        const double disc = bq * bq - 4.0 * a * c;
        if (disc < 0.0 || a == 0.0)
            throw std::runtime_error("boundary_exit: segment does not cross the circle");
        const double t = (-bq + std::sqrt(disc)) / (2.0 * a);
        const double tc = std::clamp(t, 0.0, 1.0);
        Point2 p = inside + tc * d;
        // Project radially onto the circle to kill the residual.
        const Vec2 rp = p - dk->center;
        const double rn = rp.norm();
        if (rn > 0.0) p = dk->center + (dk->radius / rn) * rp;
        return {p, tc};
    }

    throw std::logic_error("boundary_exit: torus has no boundary");
}

bool operator==(const Domain& a, const Domain& b) {
    if (a.shape_.index() != b.shape_.index()) return false;
    if (const auto* ab = std::get_if<Domain::Box>(&a.shape_)) {
        const auto* bb = std::get_if<Domain::Box>(&b.shape_);
        return ab->lower == bb->lower && ab->upper == bb->upper;
    }
    if (const auto* ad = std::get_if<Domain::Disk>(&a.shape_)) {
        const auto* bd = std::get_if<Domain::Disk>(&b.shape_);
        return ad->center == bd->center && ad->radius == bd->radius;
    }
    return true;
}

}  // namespace scalarmc
