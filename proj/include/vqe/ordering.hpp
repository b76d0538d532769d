#pragma once

#include "vqe/errors.hpp"

namespace vqe {

// Spin-orbital layout on the qubit register.
// alternating: alpha, beta, alpha, beta, ...  block: all alpha then all beta.
enum class OrbitalOrdering { alternating, block };

inline bool is_alpha(OrbitalOrdering ordering, int index, int n_spin_orbitals) {
    if (ordering == OrbitalOrdering::alternating) return index % 2 == 0;
    return index < n_spin_orbitals / 2;
}

// Qubit index of the alpha / beta spin orbital of spatial orbital `spatial`.
inline int alpha_index(OrbitalOrdering ordering, int spatial, [[maybe_unused]] int n_spin_orbitals) {
    return ordering == OrbitalOrdering::alternating ? 2 * spatial : spatial;
}

inline int beta_index(OrbitalOrdering ordering, int spatial, int n_spin_orbitals) {
    return ordering == OrbitalOrdering::alternating ? 2 * spatial + 1
                                                    : spatial + n_spin_orbitals / 2;
}

}  // namespace vqe
