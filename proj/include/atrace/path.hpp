#pragma once

#include <cstddef>
#include <vector>

#include "atrace/field.hpp"

namespace atrace {

// Ordered router IDs r_1 .. r_d, destination excluded. Immutable by
// convention: mutations go through apply_change, which returns a new path.
struct Path {
    std::vector<fe> nodes;

    Path() = default;
    explicit Path(std::vector<fe> ids) : nodes(std::move(ids)) {}

    std::size_t length() const { return nodes.size(); }

    // 1-based, matching the position convention of change events
    fe at(std::size_t pos) const { return nodes[pos - 1]; }

    bool operator==(const Path&) const = default;
};

// A single add/delete/no-change mutation. For additions, position 1 is
// before r_1 and position d+1 is after r_d; for deletions, position m names
// r_m.
struct ChangeEvent {
    enum class Kind { Added, Deleted, NoChange };

    Kind kind = Kind::NoChange;
    std::size_t position = 0; // unused for NoChange
    fe id = 0;                // added ID s or deleted ID r_m; unused for NoChange

    static ChangeEvent added(std::size_t pos, fe id) { return {Kind::Added, pos, id}; }
    static ChangeEvent deleted(std::size_t pos, fe id = 0) { return {Kind::Deleted, pos, id}; }
    static ChangeEvent none() { return {}; }

    bool operator==(const ChangeEvent&) const = default;
};

// Returns the mutated path; the input is untouched. Throws
// PositionOutOfRange / EmptyPathDeletion.
Path apply_change(const Path& path, const ChangeEvent& event);

} // namespace atrace
