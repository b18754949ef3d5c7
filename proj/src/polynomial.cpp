#include "padic/polynomial.hpp"

#include <algorithm>

#include "padic/errors.hpp"

namespace padic {

ExtElement poly_eval(const std::vector<ExtElement>& f, const ExtElement& a) {
    ExtElement acc = ExtElement::zero(a.ring());
    for (long i = static_cast<long>(f.size()) - 1; i >= 0; --i)
        acc = acc * a + f[static_cast<size_t>(i)];
    return acc;
}

std::vector<ExtElement> poly_derivative(const std::vector<ExtElement>& f) {
    std::vector<ExtElement> d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i].mul_long(static_cast<long>(i)));
    return d;
}

std::vector<std::pair<mpq_class, long>> newton_polygon(const std::vector<ExtElement>& f) {
    struct Pt {
        long i;
        mpq_class v;
    };
    std::vector<Pt> pts;
    std::vector<std::pair<long, mpq_class>> unknown; // zero-to-precision: v >= bound
    long ord = -1, deg = -1;
    for (long i = 0; i < static_cast<long>(f.size()); ++i) {
        Valuation v = f[static_cast<size_t>(i)].val();
        if (v.infinite) {
            unknown.emplace_back(i, v.bound);
            continue;
        }
        if (ord < 0) ord = i;
        deg = i;
        pts.push_back({i, v.v});
    }
    if (pts.empty()) throw InsufficientPrecision("newton_polygon of zero polynomial");
    if (!f.empty() &&
        (f.front().is_zero() || f.back().is_zero()))
        throw InsufficientPrecision(
            "newton_polygon: leading or trailing coefficient is zero to precision");

    // Lower convex hull, left to right (Andrew monotone chain, lower part).
    std::vector<Pt> hull;
    for (const auto& q : pts) {
        while (hull.size() >= 2) {
            const Pt& a = hull[hull.size() - 2];
            const Pt& b = hull[hull.size() - 1];
            // keep if b is strictly below segment a-q: cross product test
            mpq_class cross = (b.v - a.v) * (q.i - a.i) - (q.v - a.v) * (b.i - a.i);
            if (cross < 0) break; // b below: convex so far
            hull.pop_back();
        }
        hull.push_back(q);
    }

    // A hull vertex attained by an unknown coefficient would change slopes.
    for (const auto& [i, bound] : unknown) {
        if (i < ord || i > deg) continue;
        // hull value at abscissa i
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            if (hull[k].i <= i && i <= hull[k + 1].i) {
                mpq_class hv = hull[k].v + (hull[k + 1].v - hull[k].v) *
                                               mpq_class(i - hull[k].i) /
                                               mpq_class(hull[k + 1].i - hull[k].i);
                if (bound <= hv)
                    throw InsufficientPrecision(
                        "newton_polygon: interior coefficient known only above the hull");
                break;
            }
        }
    }

    std::vector<std::pair<mpq_class, long>> out;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        mpq_class slope = (hull[k + 1].v - hull[k].v) / mpq_class(hull[k + 1].i - hull[k].i);
        out.emplace_back(-slope, hull[k + 1].i - hull[k].i); // root valuation
    }
    return out;
}

ExtElement hensel_root(const std::vector<ExtElement>& f, const ExtElement& x0) {
    std::vector<ExtElement> df = poly_derivative(f);
    ExtElement fx = poly_eval(f, x0);
    ExtElement dfx = poly_eval(df, x0);
    Valuation vf = fx.val();
    Valuation vdf = dfx.val();
    if (vdf.infinite) throw HenselFails("derivative vanishes to precision at the seed");
    if (!vf.infinite && !(vf.v > 2 * vdf.v))
        throw HenselFails("v(f(x0)) > 2 v(f'(x0)) fails at the seed");

    ExtElement x = x0;
    for (int it = 0; it < 128; ++it) {
        fx = poly_eval(f, x);
        if (fx.is_zero()) return x;
        dfx = poly_eval(df, x);
        ExtElement step = fx * dfx.inverse();
        x = x - step;
        if (step.is_zero()) return x;
    }
    return x;
}

} // namespace padic
