/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_SEARCH_HPP
#define HATS_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hats/lattice.hpp"

namespace hats {

/**
 * Estimate of the cheapest remaining cost below a node.
 *
 * Implementations must be deterministic and safe for concurrent const use.
 * Goal-level nodes are never passed in by the searches (their h is 0).
 */
class HeuristicProvider {
public:
    virtual ~HeuristicProvider() = default;
    virtual double evaluate(const DetectionProblem& p, const Psv& psv) const = 0;
    /// Network layer sizes used for per-visit cost accounting; empty when none.
    virtual std::vector<std::size_t> layer_sizes() const { return {}; }
};

/// h = 0. With it A* degenerates to uniform-cost search.
class ZeroHeuristic final : public HeuristicProvider {
public:
    double evaluate(const DetectionProblem&, const Psv&) const override { return 0.0; }
};

/// The exact h* by enumeration. Only usable on small problems.
class ExactHeuristic final : public HeuristicProvider {
public:
    double evaluate(const DetectionProblem& p, const Psv& psv) const override;
};

struct VisitStats {
    std::uint64_t visited = 0;       // generated nodes, root excluded
    std::uint64_t expanded = 0;      // nodes whose successors have all been generated
    std::uint64_t peak_active = 0;
    std::uint64_t peak_resident = 0; // tree nodes held, inside ACTIVE or not
    std::uint64_t flops = 0;         // sum of estimate_visit_cost over visits
    std::uint64_t dead_ends = 0;     // non-goal nodes at the depth limit; always 0 on a perfect tree
};

struct SearchOutcome {
    std::optional<Psv> estimate;
    bool success = false;
    VisitStats stats;
};

enum class SuccessorOrder {
    BranchCost, // ascending branch cost (Schnorr-Euchner)
    Alphabet,   // raw alphabet order
};

inline constexpr std::size_t kUnboundedMemory = std::numeric_limits<std::size_t>::max();

struct SearchOptions {
    SuccessorOrder order = SuccessorOrder::BranchCost;
};

SearchOutcome astar(const DetectionProblem& p, const HeuristicProvider& h, SearchOptions opts = {});

// Memory-bounded best-first search. capacity bounds ACTIVE and must be at
// least dim()+1 (or kUnboundedMemory).
SearchOutcome hats(const DetectionProblem& p, const HeuristicProvider& h, std::size_t capacity,
                   SearchOptions opts = {});

SearchOutcome brute_force_ml(const DetectionProblem& p);

// k + sum_l (n_l * n_{l-1} + n_l); layer_sizes = {n_0, ..., n_L}.
std::uint64_t estimate_visit_cost(std::size_t level, std::span<const std::size_t> layer_sizes);

/**
 * Partially expanded search tree with a capacity-bounded ACTIVE list.
 *
 * This is the bookkeeping behind hats(): nodes remember which successors they
 * have generated and which were forgotten (evicted) along with the f-cost they
 * had. Exposed so the adjust/evict rules can be exercised on hand-built trees.
 */
class HatsTree {
public:
    using NodeId = std::uint32_t;
    static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

    struct Generated {
        std::uint32_t symbol; // alphabet index
        NodeId node;
    };
    struct Forgotten {
        std::uint32_t symbol;
        double f;
    };

    struct Node {
        NodeId parent = kNone;
        std::uint32_t symbol = 0;
        std::uint32_t depth = 0;
        double g = 0.0;
        double f = 0.0;
        std::uint64_t seq = 0;
        std::vector<Generated> generated;
        std::vector<Forgotten> forgotten;
        std::vector<std::uint32_t> ungenerated; // successors never generated, in generation order
        std::vector<double> child_branch;       // branch cost per alphabet index, filled on first expansion
        bool in_active = false;
        bool alive = false;
    };

    HatsTree(std::size_t branching, std::size_t capacity);

    NodeId add_root(double g, double f);
    // Attaches a child for `symbol`, taking it off the parent's ungenerated or
    // forgotten list. The child is not placed in ACTIVE.
    NodeId add_child(NodeId parent, std::uint32_t symbol, double g, double f);

    const Node& node(NodeId id) const { return nodes_[id]; }
    Node& node(NodeId id) { return nodes_[id]; }
    NodeId root() const noexcept { return root_; }

    void activate(NodeId id);
    void deactivate(NodeId id);
    void set_f(NodeId id, double f);

    std::size_t active_size() const noexcept { return active_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    bool active_full() const noexcept { return active_.size() >= capacity_; }
    std::size_t resident() const noexcept { return live_; }

    /// Deepest least-f node in ACTIVE, kNone when empty.
    NodeId best() const;
    /// Shallowest highest-f leaf in ACTIVE other than the root and `protect`.
    NodeId worst_leaf(NodeId protect) const;
    std::vector<NodeId> active_in_best_order() const;

    bool all_generated(NodeId id) const { return nodes_[id].ungenerated.empty(); }
    bool all_in_memory(NodeId id) const { return all_generated(id) && nodes_[id].forgotten.empty(); }
    bool is_leaf(NodeId id) const { return nodes_[id].generated.empty(); }

    /// Backs the least successor f up into `id` and its ancestors once every successor was generated.
    void try_adjust(NodeId id);
    /// Evicts worst leaves until ACTIVE has room; `protect` is never evicted.
    void try_make_space(NodeId protect);

    std::size_t evictions() const noexcept { return evictions_; }

private:
    struct Key {
        double f;
        std::uint32_t depth;
        std::uint64_t seq;
        NodeId id;
    };
    // (f asc, depth desc, seq asc). Reverse iteration gives the worst-leaf order.
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const
        {
            if (a.f != b.f) return a.f < b.f;
            if (a.depth != b.depth) return a.depth > b.depth;
            return a.seq < b.seq;
        }
    };

    NodeId allocate();
    void release(NodeId id);
    Key key_of(NodeId id) const;

    std::size_t branching_;
    std::size_t capacity_;
    std::vector<Node> nodes_;
    std::vector<NodeId> free_;
    std::set<Key, KeyLess> active_;
    NodeId root_ = kNone;
    std::uint64_t next_seq_ = 0;
    std::size_t live_ = 0;
    std::size_t evictions_ = 0;
};

} // namespace hats

#endif
