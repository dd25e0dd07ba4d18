#pragma once

#include <optional>
#include <vector>

#include "ptcount/integer.hpp"

namespace ptcount {

/// Dense integer matrix, row-major.
using IntMatrix = std::vector<std::vector<BigInt>>;

BigInt determinant(IntMatrix a);
std::size_t matrix_rank(IntMatrix a);

/// Row Hermite normal form of the lattice spanned by the rows of `a`, zero
/// rows dropped. Pivots are positive and entries above a pivot lie in
/// [0, pivot). Two row sets span the same lattice iff their forms agree.
IntMatrix hermite_normal_form(IntMatrix a);

/// Basis (as rows, in Hermite normal form) of {v in Z^cols : a v = 0}.
/// The basis is saturated: it spans every integer kernel vector.
IntMatrix integer_kernel(const IntMatrix& a);

/// Some rational solution of a x = rhs (free variables set to zero), or
/// nullopt when the system is inconsistent.
std::optional<std::vector<BigRational>> solve_rational(const IntMatrix& a, const std::vector<BigInt>& rhs);

}  // namespace ptcount
