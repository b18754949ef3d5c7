#ifndef PADIC_POLYNOMIAL_HPP
#define PADIC_POLYNOMIAL_HPP

#include <utility>
#include <vector>

#include "padic/element.hpp"

namespace padic {

/// Lower-convex-hull slopes of (i, v(a_i)). Returned slopes are root
/// valuations (the negated hull slopes); multiplicities sum to deg - ord.
/// Throws InsufficientPrecision when a zero-to-precision coefficient could
/// dip below the hull.
std::vector<std::pair<mpq_class, long>> newton_polygon(const std::vector<ExtElement>& f);

/// Newton iteration from x0; requires v(f(x0)) > 2 v(f'(x0)).
/// The result satisfies f(root) = 0 to precision and
/// v(root - x0) >= v(f(x0)) - v(f'(x0)).
ExtElement hensel_root(const std::vector<ExtElement>& f, const ExtElement& x0);

ExtElement poly_eval(const std::vector<ExtElement>& f, const ExtElement& a);
std::vector<ExtElement> poly_derivative(const std::vector<ExtElement>& f);

} // namespace padic

#endif
