/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <algorithm>
#include <limits>

#include "hats/error.hpp"
#include "hats/search.hpp"

using namespace hats;

namespace {

bool has_forgotten(const HatsTree& t, HatsTree::NodeId id, std::uint32_t symbol, double f)
{
    const auto& fg = t.node(id).forgotten;
    return std::any_of(fg.begin(), fg.end(), [&](const auto& x) { return x.symbol == symbol && x.f == f; });
}

} // namespace

TEST_CASE("best order is f ascending, then deeper first, then older first")
{
    HatsTree t(3, 100);
    const auto root = t.add_root(0, 0);
    const auto a = t.add_child(root, 0, 1, 5);
    const auto b = t.add_child(root, 1, 1, 3);
    const auto c = t.add_child(a, 0, 2, 3);
    const auto d = t.add_child(root, 2, 1, 3);
    for (auto id : {a, b, c, d})
        t.activate(id);
    t.deactivate(root);
    CHECK(t.active_in_best_order() == std::vector<HatsTree::NodeId>{c, b, d, a});
    CHECK(t.best() == c);
    CHECK(t.worst_leaf(HatsTree::kNone) == d);
    CHECK(t.worst_leaf(d) == b);
}

TEST_CASE("add_child consumes ungenerated then forgotten entries")
{
    HatsTree t(2, 10);
    const auto root = t.add_root(0, 1);
    CHECK(t.node(root).ungenerated.size() == 2);
    const auto a = t.add_child(root, 1, 1, 1);
    CHECK(t.node(root).ungenerated == std::vector<std::uint32_t>{0});
    CHECK(t.node(a).depth == 1);
    CHECK_FALSE(t.node(a).in_active);
    CHECK_THROWS_AS(t.add_child(root, 1, 1, 1), Error);
    CHECK_FALSE(t.is_leaf(root));
    CHECK(t.is_leaf(a));
}

TEST_CASE("try_adjust is a no-op while a successor is ungenerated")
{
    HatsTree t(2, 10);
    const auto root = t.add_root(0, 1);
    t.add_child(root, 0, 1, 4);
    t.try_adjust(root);
    CHECK(t.node(root).f == 1);
}

TEST_CASE("try_adjust backs up the least successor f through ancestors")
{
    HatsTree t(2, 10);
    const auto root = t.add_root(0, 1);
    const auto a = t.add_child(root, 0, 1, 2);
    t.add_child(root, 1, 1, 6);
    const auto c = t.add_child(a, 0, 2, 5);
    const auto d = t.add_child(a, 1, 2, 7);
    t.activate(c);
    t.activate(d);
    t.try_adjust(a);
    CHECK(t.node(a).f == 5);
    CHECK(t.node(root).f == 5); // min(5, 6)
}

TEST_CASE("try_adjust uses remembered f of forgotten successors")
{
    HatsTree t(2, 10);
    const auto root = t.add_root(0, 1);
    const auto a = t.add_child(root, 0, 1, 3);
    t.node(root).ungenerated.clear();
    t.node(root).forgotten.push_back({1, 2.5});
    t.node(a).f = 3;
    t.try_adjust(root);
    CHECK(t.node(root).f == 2.5);
}

TEST_CASE("try_make_space evicts the worst leaf and remembers its f in the parent")
{
    // ACTIVE = {c3 (f 1, depth 3), d2 (f 7, depth 2)}, capacity 2.
    HatsTree t(2, 2);
    const auto root = t.add_root(0, 0);
    const auto a1 = t.add_child(root, 0, 0, 0);
    const auto b2 = t.add_child(a1, 0, 0, 1);
    const auto d2 = t.add_child(a1, 1, 0, 7);
    const auto c3 = t.add_child(b2, 0, 1, 1);
    t.deactivate(root);
    t.activate(c3);
    t.activate(d2);
    REQUIRE(t.active_full());

    CHECK(t.worst_leaf(HatsTree::kNone) == d2);
    t.try_make_space(HatsTree::kNone);
    CHECK(has_forgotten(t, a1, 1, 7.0));
    // Reinserting a1 refilled ACTIVE: c3 goes, b2 comes back, then b2 goes too.
    CHECK(t.evictions() == 3);
    CHECK(has_forgotten(t, a1, 0, 1.0));
    CHECK_FALSE(t.node(b2).alive);
    CHECK(t.active_in_best_order() == std::vector<HatsTree::NodeId>{a1});
    CHECK(t.resident() == 2);
}

TEST_CASE("try_make_space stops once the parent is already in ACTIVE")
{
    HatsTree t(2, 3);
    const auto root = t.add_root(0, 0);
    const auto a = t.add_child(root, 0, 1, 1);
    t.node(root).ungenerated.clear();
    t.node(root).forgotten.push_back({1, 9.0});
    const auto c = t.add_child(a, 0, 2, 2);
    const auto d = t.add_child(a, 1, 2, 4);
    t.activate(c);
    t.activate(d);
    REQUIRE(t.active_size() == 3); // root, c, d
    t.try_make_space(HatsTree::kNone);
    // d is evicted, a is reinserted (full again), c is evicted, a already present: stop.
    CHECK(t.evictions() == 2);
    CHECK(has_forgotten(t, a, 1, 4.0));
    CHECK(has_forgotten(t, a, 0, 2.0));
    CHECK(t.node(a).in_active);
    CHECK(t.node(root).in_active);
    CHECK(t.active_size() == 2);
    CHECK(t.resident() == 2);
}

TEST_CASE("try_make_space protects the root and the node being expanded")
{
    HatsTree t(2, 2);
    const auto root = t.add_root(0, 0);
    const auto a = t.add_child(root, 0, 1, 1);
    t.activate(a);
    try {
        t.try_make_space(a);
        FAIL("expected NoEvictable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoEvictable);
    }
}

TEST_CASE("try_make_space on a non-full list does nothing")
{
    HatsTree t(2, 4);
    const auto root = t.add_root(0, 0);
    const auto a = t.add_child(root, 0, 1, 1);
    t.activate(a);
    t.try_make_space(HatsTree::kNone);
    CHECK(t.evictions() == 0);
    CHECK(t.active_size() == 2);
}
