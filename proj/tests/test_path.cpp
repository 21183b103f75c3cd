#include <doctest.h>

#include "atrace/path.hpp"

using namespace atrace;

TEST_CASE("insertion positions run from before the source to after the last node") {
    const Path p({3, 5, 2});
    CHECK(apply_change(p, ChangeEvent::added(1, 7)) == Path({7, 3, 5, 2}));
    CHECK(apply_change(p, ChangeEvent::added(2, 7)) == Path({3, 7, 5, 2}));
    CHECK(apply_change(p, ChangeEvent::added(4, 7)) == Path({3, 5, 2, 7}));
    CHECK_THROWS_AS(apply_change(p, ChangeEvent::added(5, 7)), PositionOutOfRange);
    CHECK_THROWS_AS(apply_change(p, ChangeEvent::added(0, 7)), PositionOutOfRange);
}

TEST_CASE("deletion names the node by its position") {
    const Path p({3, 5, 2});
    CHECK(apply_change(p, ChangeEvent::deleted(2)) == Path({3, 2}));
    CHECK(apply_change(p, ChangeEvent::deleted(1)) == Path({5, 2}));
    CHECK(apply_change(p, ChangeEvent::deleted(3)) == Path({3, 5}));
    CHECK_THROWS_AS(apply_change(p, ChangeEvent::deleted(4)), PositionOutOfRange);
}

TEST_CASE("no-change is the identity") {
    const Path p({3, 5, 2});
    CHECK(apply_change(p, ChangeEvent::none()) == p);
}

TEST_CASE("the last node of a path cannot be deleted away") {
    CHECK_THROWS_AS(apply_change(Path({9}), ChangeEvent::deleted(1)), EmptyPathDeletion);
}

TEST_CASE("the input path is never modified") {
    const Path p({3, 5, 2});
    (void)apply_change(p, ChangeEvent::added(2, 7));
    CHECK(p == Path({3, 5, 2}));
}

TEST_CASE("add-then-delete round trip at every position") {
    const Path p({10, 20, 30, 40, 50});
    for (std::size_t m = 1; m <= p.length() + 1; ++m) {
        const Path grown = apply_change(p, ChangeEvent::added(m, 77));
        CHECK(grown.length() == p.length() + 1);
        CHECK(grown.at(m) == 77);
        CHECK(apply_change(grown, ChangeEvent::deleted(m)) == p);
    }
}

TEST_CASE("length delta matches the event kind") {
    const Path p({1, 2, 3, 4});
    CHECK(apply_change(p, ChangeEvent::added(3, 9)).length() == 5);
    CHECK(apply_change(p, ChangeEvent::deleted(3)).length() == 3);
    CHECK(apply_change(p, ChangeEvent::none()).length() == 4);
}

TEST_CASE("duplicate IDs are allowed") {
    const Path p({5, 5, 5});
    CHECK(apply_change(p, ChangeEvent::added(2, 5)) == Path({5, 5, 5, 5}));
}
