#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace trajbench {

using TrajId = std::uint64_t;

/// Planar coordinates in the dataset's native units.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Zero-length segments are permitted and behave as points.
struct Segment {
    Point a;
    Point b;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// An identified polyline with at least two vertices.
struct Trajectory {
    TrajId id = 0;
    std::vector<Point> points;

    std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
    Segment segment(std::size_t i) const { return {points[i], points[i + 1]}; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Axis-aligned rectangle with closed boundaries. Zero-area rects are valid.
struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    static Rect of(Point p) { return {p.x, p.y, p.x, p.y}; }

    /// Identity element for `expand`: contains nothing, grows to whatever is merged in.
    static Rect empty() {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf, -inf, -inf};
    }

    bool is_empty() const { return min_x > max_x || min_y > max_y; }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double area() const { return width() * height(); }
    double margin() const { return width() + height(); }
    Point center() const { return {(min_x + max_x) / 2, (min_y + max_y) / 2}; }

    bool contains(Point p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    bool contains(const Rect& r) const {
        return r.min_x >= min_x && r.max_x <= max_x && r.min_y >= min_y && r.max_y <= max_y;
    }

    void expand(const Rect& r);
    void expand(Point p) { expand(Rect::of(p)); }
    Rect merged(const Rect& r) const {
        Rect out = *this;
        out.expand(r);
        return out;
    }
    Rect inflated(double d) const { return {min_x - d, min_y - d, max_x + d, max_y + d}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

enum class RectRelation { Outside, Partial, Inside };

const char* to_string(RectRelation rel);

/// A segment tagged with its position inside the source trajectory.
struct SequencedSegment {
    Segment segment;
    std::size_t seq = 0;
};

Rect mbr_of(const Trajectory& traj);
Rect mbr_of(std::span<const Point> points);
Rect mbr_of(const Segment& seg);

bool rects_overlap(const Rect& a, const Rect& b);

/// Euclidean distance between rectangles (0 when they overlap).
double rect_distance(const Rect& a, const Rect& b);

/// Exact sign of the orientation determinant of (a, b, c): +1 counter-clockwise,
/// -1 clockwise, 0 collinear. Uses a floating-point filter with an exact
/// expansion-arithmetic fallback, so the sign is never wrong.
int orientation(Point a, Point b, Point c);

/// Closed-segment intersection, including touching endpoints and collinear overlap.
bool segments_intersect(const Segment& s, const Segment& t);

double point_segment_distance(Point p, const Segment& s);
double segment_distance(const Segment& s, const Segment& t);
bool segment_intersects_rect(const Segment& s, const Rect& r);

// The polyline predicates below take the vertex sequence directly so that
// geometry reassembled from stored segment rows can be tested without copying.
// When `exact_tests` is non-null it is incremented once per segment pair (or
// segment/rect pair) that reaches an exact predicate.

bool polylines_intersect(std::span<const Point> p, std::span<const Point> q,
                         std::uint64_t* exact_tests = nullptr);
double polyline_distance(std::span<const Point> p, std::span<const Point> q,
                         std::uint64_t* exact_tests = nullptr);
RectRelation polyline_rect_relation(std::span<const Point> p, const Rect& rect,
                                    std::uint64_t* exact_tests = nullptr);

bool trajectory_intersects(const Trajectory& t1, const Trajectory& t2);

/// Minimum distance over all segment pairs. Returns exactly 0 iff the
/// trajectories intersect.
double trajectory_distance(const Trajectory& t1, const Trajectory& t2);

RectRelation rect_relation(const Trajectory& traj, const Rect& rect);

std::vector<SequencedSegment> segmentize(const Trajectory& traj);

} // namespace trajbench
