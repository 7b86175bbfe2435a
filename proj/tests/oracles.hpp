#pragma once

// Independent reference implementations used only by the tests. They share
// data types with the library but none of its algorithms: exact integer
// predicates, O(n^2) scans and a from-scratch quadratic split.

#include "trajbench/dataset.hpp"
#include "trajbench/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using trajbench::Dataset;
using trajbench::Point;
using trajbench::Rect;
using trajbench::TrajId;
using trajbench::Trajectory;

// Exact orientation for integer coordinates.
inline int orient(long long ax, long long ay, long long bx, long long by, long long cx, long long cy) {
    const __int128 v = static_cast<__int128>(bx - ax) * (cy - ay) - static_cast<__int128>(by - ay) * (cx - ax);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Closed segment intersection on integer coordinates.
inline bool segments_meet(Point p1, Point p2, Point q1, Point q2) {
    auto L = [](double v) { return static_cast<long long>(v); };
    const long long ax = L(p1.x), ay = L(p1.y), bx = L(p2.x), by = L(p2.y);
    const long long cx = L(q1.x), cy = L(q1.y), dx = L(q2.x), dy = L(q2.y);
    if (std::max(ax, bx) < std::min(cx, dx) || std::max(cx, dx) < std::min(ax, bx)) return false;
    if (std::max(ay, by) < std::min(cy, dy) || std::max(cy, dy) < std::min(ay, by)) return false;
    const int o1 = orient(ax, ay, bx, by, cx, cy);
    const int o2 = orient(ax, ay, bx, by, dx, dy);
    const int o3 = orient(cx, cy, dx, dy, ax, ay);
    const int o4 = orient(cx, cy, dx, dy, bx, by);
    // Collinear pairs reach here only with overlapping extents.
    return o1 * o2 <= 0 && o3 * o4 <= 0;
}

inline long double point_seg(Point p, Point a, Point b) {
    const long double vx = static_cast<long double>(b.x) - a.x;
    const long double vy = static_cast<long double>(b.y) - a.y;
    const long double wx = static_cast<long double>(p.x) - a.x;
    const long double wy = static_cast<long double>(p.y) - a.y;
    const long double len2 = vx * vx + vy * vy;
    long double t = len2 == 0 ? 0 : (wx * vx + wy * vy) / len2;
    t = std::clamp<long double>(t, 0, 1);
    const long double ex = wx - t * vx;
    const long double ey = wy - t * vy;
    return std::sqrt(ex * ex + ey * ey);
}

// Proper or touching crossing in long double; only used where the
// coordinates are far from degenerate.
inline bool segments_cross(Point p1, Point p2, Point q1, Point q2) {
    auto side = [](Point a, Point b, Point c) {
        const long double v = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                              (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    return side(p1, p2, q1) * side(p1, p2, q2) <= 0 && side(q1, q2, p1) * side(q1, q2, p2) <= 0 &&
           std::max(p1.x, p2.x) >= std::min(q1.x, q2.x) && std::max(q1.x, q2.x) >= std::min(p1.x, p2.x) &&
           std::max(p1.y, p2.y) >= std::min(q1.y, q2.y) && std::max(q1.y, q2.y) >= std::min(p1.y, p2.y);
}

inline Rect mbr(const std::vector<Point>& pts) {
    Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) {
        r.min_x = std::min(r.min_x, p.x);
        r.min_y = std::min(r.min_y, p.y);
        r.max_x = std::max(r.max_x, p.x);
        r.max_y = std::max(r.max_y, p.y);
    }
    return r;
}

inline bool boxes_touch(const Rect& a, const Rect& b) {
    return !(a.max_x < b.min_x || b.max_x < a.min_x || a.max_y < b.min_y || b.max_y < a.min_y);
}

inline double goc(const Dataset& ds) {
    const std::size_t m = ds.size();
    std::uint64_t edges = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && boxes_touch(mbr(ds.trajectories[i].points), mbr(ds.trajectories[j].points))) ++edges;
        }
    }
    // Each undirected edge was counted twice.
    return static_cast<double>(edges) / (static_cast<double>(m) * static_cast<double>(m - 1));
}

struct Ann {
    double d_o;
    double d_e;
    double ann;
};

inline Ann ann(const std::vector<Point>& pts, const std::vector<std::size_t>& owner) {
    long double sum = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        long double best = std::numeric_limits<long double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (owner[j] == owner[i]) continue;
            const long double dx = static_cast<long double>(pts[i].x) - pts[j].x;
            const long double dy = static_cast<long double>(pts[i].y) - pts[j].y;
            best = std::min(best, std::sqrt(dx * dx + dy * dy));
        }
        sum += best;
    }
    const Rect box = mbr(pts);
    const double area = (box.max_x - box.min_x) * (box.max_y - box.min_y);
    const double d_o = static_cast<double>(sum / pts.size());
    const double d_e = 0.5 / std::sqrt(static_cast<double>(pts.size()) / area);
    return {d_o, d_e, d_o / d_e};
}

inline Ann ann(const Dataset& ds) {
    std::vector<Point> pts;
    std::vector<std::size_t> owner;
    for (std::size_t t = 0; t < ds.size(); ++t) {
        for (const auto& p : ds.trajectories[t].points) {
            pts.push_back(p);
            owner.push_back(t);
        }
    }
    return ann(pts, owner);
}

// Ids of trajectories whose stored-row MBR touches the rect: the polyline
// MBR for whole rows, any segment MBR for segmented rows.
inline std::vector<TrajId> ids_with_box_touching(const Dataset& ds, const Rect& r, bool whole) {
    std::vector<TrajId> out;
    for (const auto& t : ds.trajectories) {
        bool hit = false;
        if (whole) {
            hit = boxes_touch(mbr(t.points), r);
        } else {
            for (std::size_t i = 0; i + 1 < t.points.size() && !hit; ++i) {
                hit = boxes_touch(mbr({t.points[i], t.points[i + 1]}), r);
            }
        }
        if (hit) out.push_back(t.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline long double traj_distance(const Trajectory& a, const Trajectory& b) {
    long double best = std::numeric_limits<long double>::infinity();
    for (std::size_t i = 0; i + 1 < a.points.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.points.size(); ++j) {
            const Point p1 = a.points[i], p2 = a.points[i + 1];
            const Point q1 = b.points[j], q2 = b.points[j + 1];
            if (segments_cross(p1, p2, q1, q2)) return 0;
            best = std::min({best, point_seg(p1, q1, q2), point_seg(p2, q1, q2), point_seg(q1, p1, p2),
                             point_seg(q2, p1, p2)});
        }
    }
    return best;
}

// Guttman's quadratic split of M+1 rectangles into two groups of at least
// `min_fill`, returned as index sets.
inline std::set<std::set<std::size_t>> quadratic_split(const std::vector<Rect>& rects, std::size_t min_fill) {
    auto area = [](const Rect& r) { return (r.max_x - r.min_x) * (r.max_y - r.min_y); };
    auto join = [](Rect a, const Rect& b) {
        a.min_x = std::min(a.min_x, b.min_x);
        a.min_y = std::min(a.min_y, b.min_y);
        a.max_x = std::max(a.max_x, b.max_x);
        a.max_y = std::max(a.max_y, b.max_y);
        return a;
    };
    std::size_t s1 = 0, s2 = 1;
    double worst = -1e300;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            const double d = area(join(rects[i], rects[j])) - area(rects[i]) - area(rects[j]);
            if (d > worst) {
                worst = d;
                s1 = i;
                s2 = j;
            }
        }
    }
    std::set<std::size_t> g[2] = {{s1}, {s2}};
    Rect cover[2] = {rects[s1], rects[s2]};
    std::vector<std::size_t> left;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        if (i != s1 && i != s2) left.push_back(i);
    }
    while (!left.empty()) {
        bool flushed = false;
        for (int k = 0; k < 2; ++k) {
            if (g[k].size() + left.size() == min_fill) {
                g[k].insert(left.begin(), left.end());
                left.clear();
                flushed = true;
                break;
            }
        }
        if (flushed) break;
        std::size_t at = 0;
        double pref = -1;
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double d0 = area(join(cover[0], rects[left[i]])) - area(cover[0]);
            const double d1 = area(join(cover[1], rects[left[i]])) - area(cover[1]);
            if (std::abs(d0 - d1) > pref) {
                pref = std::abs(d0 - d1);
                at = i;
            }
        }
        const std::size_t e = left[at];
        left.erase(left.begin() + static_cast<long>(at));
        const double d0 = area(join(cover[0], rects[e])) - area(cover[0]);
        const double d1 = area(join(cover[1], rects[e])) - area(cover[1]);
        int k = d0 < d1 ? 0 : 1;
        if (d0 == d1) k = area(cover[0]) <= area(cover[1]) ? 0 : 1;
        g[k].insert(e);
        cover[k] = join(cover[k], rects[e]);
    }
    return {g[0], g[1]};
}

} // namespace oracle
