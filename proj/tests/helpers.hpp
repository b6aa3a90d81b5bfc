#pragma once

#include "cbkp/cbkp.hpp"

namespace cbkp::test {

// Tables are expensive enough to share across test cases.
inline const RelationTable& table(unsigned depth) {
    static std::map<unsigned, RelationTable> cache;
    static std::mutex mu;
    std::scoped_lock lock(mu);
    auto it = cache.find(depth);
    if (it == cache.end()) it = cache.emplace(depth, build_relation_table(depth)).first;
    return it->second;
}

inline DiffPoly d1(const DiffPoly& p, unsigned depth = 3) {
    return derive(p, Axis::d1, table(depth));
}
inline DiffPoly d2(const DiffPoly& p, unsigned depth = 3) {
    return derive(p, Axis::d2, table(depth));
}

}  // namespace cbkp::test
