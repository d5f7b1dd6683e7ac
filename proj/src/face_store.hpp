#pragma once

#include "osvd/decomposition.hpp"

namespace osvd::detail {

// Zeroed factors for k1 faces padded to max(k2) slots.
OsvdFactors allocate_factors(const Dims& dims, Index k1, const std::vector<Index>& k2);

// Writes face i: U into Ufaces(:, 1:k, i), scale * s onto the diagonal of
// Sfaces(:, :, i), V^T into Vfaces(1:k, :, i).
void store_face(OsvdFactors& f, Index i, const SvdFactors& face, double scale);

} // namespace osvd::detail
