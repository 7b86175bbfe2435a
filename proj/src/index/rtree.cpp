#include "trajbench/index/rtree.hpp"

#include "trajbench/error.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace trajbench {

namespace {

double enlargement(const Rect& base, const Rect& add) { return base.merged(add).area() - base.area(); }

template <typename Entries>
Rect cover(const Entries& entries) {
    Rect r = Rect::empty();
    for (const auto& e : entries) r.expand(e.box);
    return r;
}

} // namespace

RTree::RTree(std::size_t max_entries, std::size_t min_entries)
    : max_(max_entries), min_(min_entries), root_(std::make_unique<Node>()) {
    if (min_ < 2 || min_ > max_ / 2) {
        throw Error(ErrorCode::InvalidParams, "R-tree needs 2 <= min <= max/2");
    }
}

RTree::~RTree() = default;

RTree::Entry& RTree::entry_for(Node* child) {
    for (auto& e : child->parent->entries) {
        if (e.child.get() == child) return e;
    }
    throw std::logic_error("R-tree child missing from its parent");
}

RTree::Node* RTree::choose_node(const Rect& box, int level, QueryStats& stats) {
    Node* node = root_.get();
    ++stats.nodes_visited;
    while (node->level > level) {
        Entry* best = nullptr;
        double best_growth = std::numeric_limits<double>::infinity();
        double best_area = std::numeric_limits<double>::infinity();
        for (auto& e : node->entries) {
            const double growth = enlargement(e.box, box);
            const double area = e.box.area();
            if (growth < best_growth || (growth == best_growth && area < best_area)) {
                best = &e;
                best_growth = growth;
                best_area = area;
            }
        }
        node = best->child.get();
        ++stats.nodes_visited;
    }
    return node;
}

void RTree::insert(RowId row, const Rect& box, QueryStats& stats) {
    insert_entry(Entry{box, nullptr, row}, 0, stats);
    ++size_;
}

void RTree::insert_entry(Entry entry, int level, QueryStats& stats) {
    Node* node = choose_node(entry.box, level, stats);
    if (entry.child) entry.child->parent = node;
    node->entries.push_back(std::move(entry));
    ++stats.rows_touched;
    std::unique_ptr<Node> sibling;
    if (node->entries.size() > max_) sibling = split(*node, stats);
    adjust_tree(node, std::move(sibling), stats);
}

std::unique_ptr<RTree::Node> RTree::split(Node& node, QueryStats& stats) {
    std::vector<Entry> pool = std::move(node.entries);
    node.entries.clear();

    // Quadratic PickSeeds: the pair wasting the most area if grouped together.
    std::size_t seed_a = 0;
    std::size_t seed_b = 1;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const double waste =
                pool[i].box.merged(pool[j].box).area() - pool[i].box.area() - pool[j].box.area();
            if (waste > worst) {
                worst = waste;
                seed_a = i;
                seed_b = j;
            }
        }
    }

    auto sibling = std::make_unique<Node>();
    sibling->level = node.level;
    sibling->parent = node.parent;
    std::vector<Entry>* groups[2] = {&node.entries, &sibling->entries};
    Rect boxes[2] = {pool[seed_a].box, pool[seed_b].box};
    groups[0]->push_back(std::move(pool[seed_a]));
    groups[1]->push_back(std::move(pool[seed_b]));

    std::vector<Entry> rest;
    rest.reserve(pool.size() - 2);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i != seed_a && i != seed_b) rest.push_back(std::move(pool[i]));
    }

    auto assign = [&](std::size_t g, Entry&& e) {
        boxes[g].expand(e.box);
        groups[g]->push_back(std::move(e));
    };

    while (!rest.empty()) {
        for (std::size_t g = 0; g < 2; ++g) {
            if (groups[g]->size() + rest.size() == min_) {
                for (auto& e : rest) assign(g, std::move(e));
                rest.clear();
                break;
            }
        }
        if (rest.empty()) break;

        // PickNext: the entry with the strongest preference for one group.
        std::size_t pick = 0;
        double best_diff = -1.0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const double d0 = enlargement(boxes[0], rest[i].box);
            const double d1 = enlargement(boxes[1], rest[i].box);
            const double diff = std::abs(d0 - d1);
            if (diff > best_diff) {
                best_diff = diff;
                pick = i;
            }
        }
        Entry e = std::move(rest[pick]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));

        const double d0 = enlargement(boxes[0], e.box);
        const double d1 = enlargement(boxes[1], e.box);
        std::size_t g = 0;
        if (d1 < d0) {
            g = 1;
        } else if (d0 == d1) {
            const double a0 = boxes[0].area();
            const double a1 = boxes[1].area();
            if (a1 < a0 || (a1 == a0 && groups[1]->size() < groups[0]->size())) g = 1;
        }
        assign(g, std::move(e));
    }

    for (auto& e : sibling->entries) {
        if (e.child) e.child->parent = sibling.get();
    }
    stats.rows_touched += node.entries.size() + sibling->entries.size();
    return sibling;
}

void RTree::adjust_tree(Node* node, std::unique_ptr<Node> sibling, QueryStats& stats) {
    while (node != root_.get()) {
        Node* parent = node->parent;
        entry_for(node).box = cover(node->entries);
        ++stats.rows_touched;
        if (sibling) {
            Rect sib_box = cover(sibling->entries);
            sibling->parent = parent;
            parent->entries.push_back(Entry{sib_box, std::move(sibling), 0});
            ++stats.rows_touched;
            if (parent->entries.size() > max_) sibling = split(*parent, stats);
        }
        node = parent;
    }
    if (sibling) {
        auto new_root = std::make_unique<Node>();
        new_root->level = root_->level + 1;
        Node* old_root = root_.get();
        Rect a = cover(old_root->entries);
        Rect b = cover(sibling->entries);
        old_root->parent = new_root.get();
        sibling->parent = new_root.get();
        new_root->entries.push_back(Entry{a, std::move(root_), 0});
        new_root->entries.push_back(Entry{b, std::move(sibling), 0});
        stats.rows_touched += 2;
        root_ = std::move(new_root);
    }
}

RTree::Node* RTree::find_leaf(Node* node, RowId row, const Rect& box, std::size_t& slot,
                              QueryStats& stats) {
    ++stats.nodes_visited;
    if (node->level == 0) {
        for (std::size_t i = 0; i < node->entries.size(); ++i) {
            if (node->entries[i].row == row) {
                slot = i;
                return node;
            }
        }
        return nullptr;
    }
    for (auto& e : node->entries) {
        if (!e.box.contains(box)) continue;
        if (Node* found = find_leaf(e.child.get(), row, box, slot, stats)) return found;
    }
    return nullptr;
}

void RTree::remove(RowId row, const Rect& box, QueryStats& stats) {
    std::size_t slot = 0;
    Node* leaf = find_leaf(root_.get(), row, box, slot, stats);
    if (!leaf) throw Error(ErrorCode::NotFound, "row " + std::to_string(row) + " not in R-tree");
    leaf->entries.erase(leaf->entries.begin() + static_cast<std::ptrdiff_t>(slot));
    ++stats.rows_touched;
    --size_;
    condense(leaf, stats);
    while (root_->level > 0 && root_->entries.size() == 1) {
        std::unique_ptr<Node> child = std::move(root_->entries.front().child);
        child->parent = nullptr;
        root_ = std::move(child);
        ++stats.rows_touched;
    }
}

void RTree::condense(Node* leaf, QueryStats& stats) {
    std::vector<std::unique_ptr<Node>> orphans;
    Node* node = leaf;
    while (node != root_.get()) {
        Node* parent = node->parent;
        if (node->entries.size() < min_) {
            auto it = std::find_if(parent->entries.begin(), parent->entries.end(),
                                   [&](const Entry& e) { return e.child.get() == node; });
            orphans.push_back(std::move(it->child));
            parent->entries.erase(it);
        } else {
            entry_for(node).box = cover(node->entries);
        }
        ++stats.rows_touched;
        node = parent;
    }
    for (auto& orphan : orphans) {
        for (auto& e : orphan->entries) insert_entry(std::move(e), orphan->level, stats);
    }
}

void RTree::search(const Rect& query, std::vector<RowId>& out, QueryStats& stats) const {
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        ++stats.nodes_visited;
        for (const auto& e : node->entries) {
            if (!rects_overlap(e.box, query)) continue;
            if (node->level == 0) {
                out.push_back(e.row);
            } else {
                stack.push_back(e.child.get());
            }
        }
    }
}

std::size_t RTree::height() const { return static_cast<std::size_t>(root_->level) + 1; }

std::vector<std::vector<RowId>> RTree::leaves() const {
    std::vector<std::vector<RowId>> out;
    std::function<void(const Node&)> walk = [&](const Node& n) {
        if (n.level == 0) {
            std::vector<RowId> rows;
            for (const auto& e : n.entries) rows.push_back(e.row);
            out.push_back(std::move(rows));
            return;
        }
        for (const auto& e : n.entries) walk(*e.child);
    };
    walk(*root_);
    return out;
}

void RTree::check_invariants() const {
    std::size_t counted = 0;
    std::function<void(const Node&, int)> walk = [&](const Node& n, int expected_level) {
        if (n.level != expected_level) throw std::logic_error("R-tree leaves at unequal depth");
        const bool is_root = &n == root_.get();
        if (!is_root && (n.entries.size() < min_ || n.entries.size() > max_)) {
            throw std::logic_error("R-tree node with " + std::to_string(n.entries.size()) +
                                   " entries");
        }
        if (n.entries.size() > max_) throw std::logic_error("R-tree root overflow");
        if (is_root && n.level > 0 && n.entries.size() < 2) {
            throw std::logic_error("R-tree internal root with a single child");
        }
        for (const auto& e : n.entries) {
            if (n.level == 0) {
                ++counted;
                continue;
            }
            if (e.child->parent != &n) throw std::logic_error("R-tree parent link broken");
            if (!(e.box == cover(e.child->entries))) {
                throw std::logic_error("R-tree entry box is not the union of its child");
            }
            walk(*e.child, expected_level - 1);
        }
    };
    walk(*root_, root_->level);
    if (counted != size_) throw std::logic_error("R-tree size mismatch");
}

} // namespace trajbench
