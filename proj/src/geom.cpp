#include "trajbench/geom.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace trajbench {

void Rect::expand(const Rect& r) {
    min_x = std::min(min_x, r.min_x);
    min_y = std::min(min_y, r.min_y);
    max_x = std::max(max_x, r.max_x);
    max_y = std::max(max_y, r.max_y);
}

const char* to_string(RectRelation rel) {
    switch (rel) {
    case RectRelation::Outside: return "Outside";
    case RectRelation::Partial: return "Partial";
    case RectRelation::Inside: return "Inside";
    }
    return "?";
}

Rect mbr_of(std::span<const Point> points) {
    Rect r = Rect::empty();
    for (const Point& p : points) {
        r.expand(p);
    }
    return r;
}

Rect mbr_of(const Trajectory& traj) { return mbr_of(std::span<const Point>(traj.points)); }

Rect mbr_of(const Segment& seg) {
    return {std::min(seg.a.x, seg.b.x), std::min(seg.a.y, seg.b.y), std::max(seg.a.x, seg.b.x),
            std::max(seg.a.y, seg.b.y)};
}

bool rects_overlap(const Rect& a, const Rect& b) {
    return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

double rect_distance(const Rect& a, const Rect& b) {
    const double dx = std::max({0.0, a.min_x - b.max_x, b.min_x - a.max_x});
    const double dy = std::max({0.0, a.min_y - b.max_y, b.min_y - a.max_y});
    return std::sqrt(dx * dx + dy * dy);
}

namespace {

// Error-free transformations (Knuth two-sum, fma two-product).
inline void two_sum(double a, double b, double& sum, double& err) {
    sum = a + b;
    const double bv = sum - a;
    const double av = sum - bv;
    err = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& prod, double& err) {
    prod = a * b;
    err = std::fma(a, b, -prod);
}

int orientation_exact(Point a, Point b, Point c) {
    // (a-c) x (b-c) expanded into six exact products; the c.x*c.y terms cancel.
    const std::array<std::array<double, 2>, 6> factors{{
        {a.x, b.y},
        {-a.x, c.y},
        {-c.x, b.y},
        {-a.y, b.x},
        {a.y, c.x},
        {c.y, b.x},
    }};
    std::array<double, 12> expansion{};
    std::size_t len = 0;
    auto grow = [&](double term) {
        double q = term;
        for (std::size_t i = 0; i < len; ++i) {
            double s = 0.0;
            double e = 0.0;
            two_sum(q, expansion[i], s, e);
            expansion[i] = e;
            q = s;
        }
        expansion[len++] = q;
    };
    for (const auto& f : factors) {
        double p = 0.0;
        double e = 0.0;
        two_product(f[0], f[1], p, e);
        grow(e);
        grow(p);
    }
    // Non-overlapping expansion in increasing magnitude: the last non-zero
    // component carries the sign of the exact sum.
    for (std::size_t i = len; i-- > 0;) {
        if (expansion[i] > 0.0) return 1;
        if (expansion[i] < 0.0) return -1;
    }
    return 0;
}

inline bool on_box(Point p, Point q, Point r) {
    return q.x >= std::min(p.x, r.x) && q.x <= std::max(p.x, r.x) && q.y >= std::min(p.y, r.y) &&
           q.y <= std::max(p.y, r.y);
}

} // namespace

int orientation(Point a, Point b, Point c) {
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
    constexpr double bound_factor = (3.0 + 16.0 * eps) * eps;
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    const double bound = bound_factor * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orientation_exact(a, b, c);
}

bool segments_intersect(const Segment& s, const Segment& t) {
    if (!rects_overlap(mbr_of(s), mbr_of(t))) return false;
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_box(s.a, t.a, s.b)) return true;
    if (o2 == 0 && on_box(s.a, t.b, s.b)) return true;
    if (o3 == 0 && on_box(t.a, s.a, t.b)) return true;
    if (o4 == 0 && on_box(t.a, s.b, t.b)) return true;
    return false;
}

double point_segment_distance(Point p, const Segment& s) {
    const double vx = s.b.x - s.a.x;
    const double vy = s.b.y - s.a.y;
    const double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2, 0.0, 1.0);
    }
    const double dx = p.x - (s.a.x + t * vx);
    const double dy = p.y - (s.a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

double segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) return 0.0;
    const double d = std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                               point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
    // Disjoint segments closer than the rounding error of the projection still
    // have a positive distance.
    return d > 0.0 ? d : std::numeric_limits<double>::denorm_min();
}

bool segment_intersects_rect(const Segment& s, const Rect& r) {
    if (r.contains(s.a) || r.contains(s.b)) return true;
    if (!rects_overlap(mbr_of(s), r)) return false;
    const Point ll{r.min_x, r.min_y};
    const Point lr{r.max_x, r.min_y};
    const Point ur{r.max_x, r.max_y};
    const Point ul{r.min_x, r.max_y};
    return segments_intersect(s, {ll, lr}) || segments_intersect(s, {lr, ur}) ||
           segments_intersect(s, {ur, ul}) || segments_intersect(s, {ul, ll});
}

namespace {

std::vector<Rect> segment_mbrs(std::span<const Point> p) {
    std::vector<Rect> out;
    out.reserve(p.size() > 0 ? p.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        out.push_back(mbr_of(Segment{p[i], p[i + 1]}));
    }
    return out;
}

} // namespace

bool polylines_intersect(std::span<const Point> p, std::span<const Point> q,
                         std::uint64_t* exact_tests) {
    const Rect q_box = mbr_of(q);
    const std::vector<Rect> q_boxes = segment_mbrs(q);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Segment s{p[i], p[i + 1]};
        const Rect s_box = mbr_of(s);
        if (!rects_overlap(s_box, q_box)) continue;
        for (std::size_t j = 0; j < q_boxes.size(); ++j) {
            if (!rects_overlap(s_box, q_boxes[j])) continue;
            if (exact_tests) ++*exact_tests;
            if (segments_intersect(s, {q[j], q[j + 1]})) return true;
        }
    }
    return false;
}

double polyline_distance(std::span<const Point> p, std::span<const Point> q,
                         std::uint64_t* exact_tests) {
    const std::vector<Rect> p_boxes = segment_mbrs(p);
    const std::vector<Rect> q_boxes = segment_mbrs(q);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p_boxes.size(); ++i) {
        for (std::size_t j = 0; j < q_boxes.size(); ++j) {
            if (rect_distance(p_boxes[i], q_boxes[j]) >= best) continue;
            if (exact_tests) ++*exact_tests;
            const double d = segment_distance({p[i], p[i + 1]}, {q[j], q[j + 1]});
            if (d == 0.0) return 0.0;
            best = std::min(best, d);
        }
    }
    return best;
}

RectRelation polyline_rect_relation(std::span<const Point> p, const Rect& rect,
                                    std::uint64_t* exact_tests) {
    if (std::all_of(p.begin(), p.end(), [&](Point v) { return rect.contains(v); })) {
        return RectRelation::Inside;
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (exact_tests) ++*exact_tests;
        if (segment_intersects_rect({p[i], p[i + 1]}, rect)) return RectRelation::Partial;
    }
    return RectRelation::Outside;
}

bool trajectory_intersects(const Trajectory& t1, const Trajectory& t2) {
    return polylines_intersect(t1.points, t2.points);
}

double trajectory_distance(const Trajectory& t1, const Trajectory& t2) {
    return polyline_distance(t1.points, t2.points);
}

RectRelation rect_relation(const Trajectory& traj, const Rect& rect) {
    return polyline_rect_relation(traj.points, rect);
}

std::vector<SequencedSegment> segmentize(const Trajectory& traj) {
    std::vector<SequencedSegment> out;
    out.reserve(traj.segment_count());
    for (std::size_t i = 0; i < traj.segment_count(); ++i) {
        out.push_back({traj.segment(i), i});
    }
    return out;
}

} // namespace trajbench
