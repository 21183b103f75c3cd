#include "atrace/path.hpp"

#include <string>

#include "atrace/errors.hpp"

namespace atrace {

Path apply_change(const Path& path, const ChangeEvent& event) {
    const std::size_t d = path.length();
    switch (event.kind) {
        case ChangeEvent::Kind::NoChange:
            return path;
        case ChangeEvent::Kind::Added: {
            if (event.position < 1 || event.position > d + 1)
                throw PositionOutOfRange("addition position " + std::to_string(event.position) +
                                         " outside 1.." + std::to_string(d + 1));
            Path out = path;
            out.nodes.insert(out.nodes.begin() + static_cast<std::ptrdiff_t>(event.position - 1),
                             event.id);
            return out;
        }
        case ChangeEvent::Kind::Deleted: {
            if (event.position < 1 || event.position > d)
                throw PositionOutOfRange("deletion position " + std::to_string(event.position) +
                                         " outside 1.." + std::to_string(d));
            if (d == 1) throw EmptyPathDeletion();
            Path out = path;
            out.nodes.erase(out.nodes.begin() + static_cast<std::ptrdiff_t>(event.position - 1));
            return out;
        }
    }
    return path;
}

} // namespace atrace
