/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hats/search.hpp"

namespace hats {

HatsTree::HatsTree(std::size_t branching, std::size_t capacity) : branching_(branching), capacity_(capacity)
{
    if (branching_ == 0)
        throw Error(ErrorCode::InvalidConfig, "HatsTree needs a nonempty alphabet");
    if (capacity_ == 0)
        throw Error(ErrorCode::CapacityTooSmall, "ACTIVE capacity must be positive");
}

HatsTree::NodeId HatsTree::allocate()
{
    NodeId id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        nodes_[id] = Node{};
    } else {
        id = static_cast<NodeId>(nodes_.size());
        nodes_.emplace_back();
    }
    Node& n = nodes_[id];
    n.alive = true;
    n.seq = next_seq_++;
    n.ungenerated.resize(branching_);
    std::iota(n.ungenerated.begin(), n.ungenerated.end(), 0u);
    ++live_;
    return id;
}

void HatsTree::release(NodeId id)
{
    Node& n = nodes_[id];
    n.alive = false;
    n.generated.clear();
    n.forgotten.clear();
    n.ungenerated.clear();
    n.child_branch.clear();
    free_.push_back(id);
    --live_;
}

HatsTree::NodeId HatsTree::add_root(double g, double f)
{
    root_ = allocate();
    nodes_[root_].g = g;
    nodes_[root_].f = f;
    activate(root_);
    return root_;
}

HatsTree::NodeId HatsTree::add_child(NodeId parent, std::uint32_t symbol, double g, double f)
{
    {
        Node& par = nodes_[parent];
        auto un = std::find(par.ungenerated.begin(), par.ungenerated.end(), symbol);
        if (un != par.ungenerated.end()) {
            par.ungenerated.erase(un);
        } else {
            auto fg = std::find_if(par.forgotten.begin(), par.forgotten.end(),
                                   [&](const Forgotten& x) { return x.symbol == symbol; });
            if (fg == par.forgotten.end())
                throw Error(ErrorCode::InvalidConfig, "successor " + std::to_string(symbol) + " already resident");
            par.forgotten.erase(fg);
        }
    }
    const NodeId id = allocate(); // may reallocate nodes_
    Node& child = nodes_[id];
    child.parent = parent;
    child.symbol = symbol;
    child.depth = nodes_[parent].depth + 1;
    child.g = g;
    child.f = f;
    nodes_[parent].generated.push_back({symbol, id});
    return id;
}

HatsTree::Key HatsTree::key_of(NodeId id) const
{
    const Node& n = nodes_[id];
    return {n.f, n.depth, n.seq, id};
}

void HatsTree::activate(NodeId id)
{
    Node& n = nodes_[id];
    if (n.in_active)
        return;
    n.in_active = true;
    active_.insert(key_of(id));
}

void HatsTree::deactivate(NodeId id)
{
    Node& n = nodes_[id];
    if (!n.in_active)
        return;
    active_.erase(key_of(id));
    n.in_active = false;
}

void HatsTree::set_f(NodeId id, double f)
{
    Node& n = nodes_[id];
    if (n.in_active) {
        active_.erase(key_of(id));
        n.f = f;
        active_.insert(key_of(id));
    } else {
        n.f = f;
    }
}

HatsTree::NodeId HatsTree::best() const
{
    return active_.empty() ? kNone : active_.begin()->id;
}

HatsTree::NodeId HatsTree::worst_leaf(NodeId protect) const
{
    for (auto it = active_.rbegin(); it != active_.rend(); ++it) {
        const NodeId id = it->id;
        if (id == root_ || id == protect || !is_leaf(id))
            continue;
        return id;
    }
    return kNone;
}

std::vector<HatsTree::NodeId> HatsTree::active_in_best_order() const
{
    std::vector<NodeId> out;
    out.reserve(active_.size());
    for (const Key& k : active_)
        out.push_back(k.id);
    return out;
}

void HatsTree::try_adjust(NodeId id)
{
    while (id != kNone) {
        const Node& n = nodes_[id];
        if (!all_generated(id))
            return;
        double least = std::numeric_limits<double>::infinity();
        for (const Generated& c : n.generated)
            least = std::min(least, nodes_[c.node].f);
        for (const Forgotten& c : n.forgotten)
            least = std::min(least, c.f);
        if (!std::isfinite(least) || least == n.f)
            return;
        set_f(id, least);
        id = n.parent;
    }
}

void HatsTree::try_make_space(NodeId protect)
{
    while (active_.size() >= capacity_) {
        const NodeId victim = worst_leaf(protect);
        if (victim == kNone)
            throw Error(ErrorCode::NoEvictable, "every node in a full ACTIVE list is protected or internal");

        const NodeId parent = nodes_[victim].parent;
        deactivate(victim);
        Node& par = nodes_[parent];
        auto it = std::find_if(par.generated.begin(), par.generated.end(),
                               [&](const Generated& g) { return g.node == victim; });
        par.generated.erase(it);
        par.forgotten.push_back({nodes_[victim].symbol, nodes_[victim].f});
        release(victim);
        ++evictions_;

        if (nodes_[parent].in_active)
            return;
        activate(parent);
    }
}

} // namespace hats
