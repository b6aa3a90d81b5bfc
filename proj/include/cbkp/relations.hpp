#pragma once

#include <utility>
#include <vector>

#include "cbkp/hierarchy.hpp"

namespace cbkp {

// Derives the rewriting rules d2(v_m), m <= depth, from the defining
// relation of the hierarchy: X = d1 [L_1, d1^-1 u] is self-adjoint of
// order at most 0, and its symmetric-form coefficients are exactly the
// eliminated jets. The w side is the involution image of the v side.
inline RelationTable build_relation_table(unsigned depth) {
    const int k = static_cast<int>(depth);
    LOperator l1 = build_L(1, depth);
    // d1^-1 u, truncated two slots deeper than L so X reaches -2K-2
    const int mu_d = -(2 * k + 4);
    PsiDO inv_u = mul(PsiDO::main_power(Orientation::d1, -1, mu_d),
                      PsiDO::constant(Orientation::d1, DiffPoly::u()), RelationTable::empty());
    PsiDO comm = mul(l1.op, inv_u, RelationTable::empty()) -
                 mul(inv_u, l1.op, RelationTable::empty());
    PsiDO x = mul(PsiDO::main_power(Orientation::d1, 1), comm, RelationTable::empty());
    std::vector<DiffPoly> dv = symmetric_extract(x, depth, RelationTable::empty());
    std::vector<DiffPoly> dw;
    dw.reserve(dv.size());
    for (const auto& p : dv) dw.push_back(tau(p));
    return RelationTable(std::move(dv), std::move(dw));
}

}  // namespace cbkp
