#include "trajbench/index/quadtree.hpp"

#include "trajbench/error.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace trajbench {

namespace {

Rect usable_domain(const Rect& domain) {
    if (domain.is_empty()) return {0.0, 0.0, 1.0, 1.0};
    Rect r = domain;
    const double side = std::max({r.width(), r.height(), 1e-9});
    if (r.width() <= 0.0) r = {r.min_x - side / 2, r.min_y, r.min_x + side / 2, r.max_y};
    if (r.height() <= 0.0) r = {r.min_x, r.min_y - side / 2, r.max_x, r.min_y + side / 2};
    return r;
}

} // namespace

QuadTree::QuadTree(const Rect& domain, std::size_t capacity, std::size_t max_depth)
    : capacity_(capacity), max_depth_(max_depth), root_(std::make_unique<Node>()) {
    if (capacity_ < 1) throw Error(ErrorCode::InvalidParams, "quadtree capacity must be >= 1");
    root_->cell = usable_domain(domain);
}

QuadTree::~QuadTree() = default;

std::array<Rect, 4> QuadTree::quadrants(const Rect& c, Point m) {
    return {Rect{c.min_x, c.min_y, m.x, m.y}, Rect{m.x, c.min_y, c.max_x, m.y},
            Rect{c.min_x, m.y, m.x, c.max_y}, Rect{m.x, m.y, c.max_x, c.max_y}};
}

int QuadTree::child_containing(const Node& node, const Rect& box) {
    if (node.is_leaf()) return -1;
    for (int q = 0; q < 4; ++q) {
        if (node.children[q]->cell.contains(box)) return q;
    }
    return -1;
}

void QuadTree::grow_to(const Rect& box, QueryStats& stats) {
    while (!root_->cell.contains(box)) {
        const Rect c = root_->cell;
        const bool left = box.min_x < c.min_x;
        const bool down = box.min_y < c.min_y;
        const Rect grown{left ? c.min_x - c.width() : c.min_x, down ? c.min_y - c.height() : c.min_y,
                         left ? c.max_x : c.max_x + c.width(), down ? c.max_y : c.max_y + c.height()};
        auto new_root = std::make_unique<Node>();
        new_root->cell = grown;
        // Split at the old root's corner so the old root stays an exact quadrant.
        new_root->split = {left ? c.min_x : c.max_x, down ? c.min_y : c.max_y};
        const auto quads = quadrants(grown, new_root->split);
        const int old_slot = (left ? 1 : 0) + (down ? 2 : 0);
        for (int q = 0; q < 4; ++q) {
            if (q == old_slot) {
                new_root->children[q] = std::move(root_);
            } else {
                new_root->children[q] = std::make_unique<Node>();
                new_root->children[q]->cell = quads[q];
            }
        }
        stats.nodes_visited += 4;
        root_ = std::move(new_root);
    }
}

void QuadTree::split(Node& node, std::size_t depth, QueryStats& stats) {
    node.split = node.cell.center();
    const auto quads = quadrants(node.cell, node.split);
    for (int q = 0; q < 4; ++q) {
        node.children[q] = std::make_unique<Node>();
        node.children[q]->cell = quads[q];
    }
    std::vector<Entry> keep;
    for (auto& e : node.entries) {
        const int q = child_containing(node, e.box);
        if (q < 0) {
            keep.push_back(e);
        } else {
            node.children[q]->entries.push_back(e);
            ++stats.rows_touched;
        }
    }
    node.entries = std::move(keep);
    for (auto& child : node.children) {
        if (child->entries.size() > capacity_ && depth + 1 < max_depth_) {
            split(*child, depth + 1, stats);
        }
    }
}

void QuadTree::insert(RowId row, const Rect& box, QueryStats& stats) {
    grow_to(box, stats);
    Node* node = root_.get();
    std::size_t depth = 0;
    ++stats.nodes_visited;
    for (int q = child_containing(*node, box); q >= 0; q = child_containing(*node, box)) {
        node = node->children[q].get();
        ++depth;
        ++stats.nodes_visited;
    }
    node->entries.push_back({row, box});
    ++stats.rows_touched;
    ++size_;
    if (node->is_leaf() && node->entries.size() > capacity_ && depth < max_depth_) {
        split(*node, depth, stats);
    }
}

void QuadTree::remove(RowId row, const Rect& box, QueryStats& stats) {
    // A box on a dividing line fits more than one quadrant, and root growth
    // can leave such a box on the side insert would not pick today, so every
    // containing child is searched.
    std::vector<Node*> path;
    std::function<bool(Node*)> visit = [&](Node* node) {
        path.push_back(node);
        ++stats.nodes_visited;
        auto it = std::find_if(node->entries.begin(), node->entries.end(),
                               [&](const Entry& e) { return e.row == row; });
        if (it != node->entries.end()) {
            node->entries.erase(it);
            return true;
        }
        if (!node->is_leaf()) {
            for (auto& c : node->children) {
                if (c->cell.contains(box) && visit(c.get())) return true;
            }
        }
        path.pop_back();
        return false;
    };
    if (!root_->cell.contains(box) || !visit(root_.get())) {
        throw Error(ErrorCode::NotFound, "row " + std::to_string(row) + " not in quadtree");
    }
    ++stats.rows_touched;
    --size_;

    // Collapse parents whose four children have become empty leaves.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        Node* n = *it;
        if (n->is_leaf()) continue;
        const bool empty_children = std::all_of(n->children.begin(), n->children.end(), [](const auto& c) {
            return c->is_leaf() && c->entries.empty();
        });
        if (!empty_children) break;
        for (auto& c : n->children) c.reset();
        ++stats.nodes_visited;
    }
}

void QuadTree::search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const {
    if (!rects_overlap(root_->cell, query)) return;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        ++stats.nodes_visited;
        for (const auto& e : node->entries) {
            if (rects_overlap(e.box, query)) out.push_back(e.row);
        }
        if (node->is_leaf()) continue;
        for (const auto& c : node->children) {
            if (rects_overlap(c->cell, query)) stack.push_back(c.get());
        }
    }
}

std::size_t QuadTree::node_count() const {
    std::size_t n = 0;
    std::function<void(const Node&)> walk = [&](const Node& node) {
        ++n;
        if (!node.is_leaf()) {
            for (const auto& c : node.children) walk(*c);
        }
    };
    walk(*root_);
    return n;
}

void QuadTree::check_invariants() const {
    std::size_t counted = 0;
    std::function<void(const Node&)> walk = [&](const Node& node) {
        for (const auto& e : node.entries) {
            if (!node.cell.contains(e.box)) {
                throw std::logic_error("quadtree entry outside its cell");
            }
            if (child_containing(node, e.box) >= 0) {
                throw std::logic_error("quadtree entry not at its deepest containing cell");
            }
        }
        counted += node.entries.size();
        if (node.is_leaf()) return;
        const auto quads = quadrants(node.cell, node.split);
        for (int q = 0; q < 4; ++q) {
            if (!node.children[q]) throw std::logic_error("quadtree node with missing child");
            if (!(node.children[q]->cell == quads[q])) {
                throw std::logic_error("quadtree child cell is not a quadrant of its parent");
            }
            walk(*node.children[q]);
        }
    };
    walk(*root_);
    if (counted != size_) throw std::logic_error("quadtree size mismatch");
}

} // namespace trajbench
