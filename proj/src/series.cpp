#include "padic/series.hpp"

#include <algorithm>
#include <cmath>

namespace padic {

GaussVal gauss_val(const ESeries& f, const mpq_class& r) {
    if (f.window_empty()) throw WindowExhausted("gauss_val on an empty window");
    if (f.is_zero()) {
        GaussVal g;
        g.v = Valuation::zero_at(mpq_class(f.model().ring()->working_digits()));
        return g;
    }
    bool have = false;
    mpq_class best;
    long argmin = 0;
    for (const auto& [d, c] : f.coeffs()) {
        Valuation v = c.val();
        if (v.infinite) continue;
        mpq_class t = v.v + mpq_class(d) * r;
        if (!have || t < best) {
            best = t;
            argmin = d;
            have = true;
        }
    }
    GaussVal g;
    g.v = Valuation::finite(best);
    g.boundary = (f.lo() != -kWindowInf && argmin == f.lo()) ||
                 (f.hi() != kWindowInf && argmin == f.hi());
    return g;
}

std::string growth_name(Growth g) {
    switch (g) {
        case Growth::Overconvergent: return "overconvergent";
        case Growth::UnitRadius: return "unit-radius";
        case Growth::Subunit: return "subunit";
    }
    return "?";
}

GrowthReport growth_slope(const ESeries& f, const mpq_class& tail_fraction) {
    // Measure along |degree| on the side where the support lives; the
    // knowledge window must be finite there.
    const bool negative_side = f.support_hi() <= 0 && f.support_lo() < 0;
    const long far_end = negative_side ? -f.lo() : f.hi();
    if (far_end >= kWindowInf)
        throw WindowTooShort("growth_slope needs a finite window on the support side");
    const long len = far_end + 1;
    if (len < 16) throw WindowTooShort("growth_slope needs a window of length >= 16");
    mpq_class tf = tail_fraction;
    if (tf <= 0 || tf > 1) tf = mpq_class(1, 2);
    long tail_len = static_cast<long>(mpz_class(mpz_class(len) * tf.get_num() / tf.get_den()).get_si());
    tail_len = std::max<long>(tail_len, 8);
    const long tail_from = std::max<long>(far_end - tail_len + 1, 1);

    GrowthReport rep;
    rep.tail_lo = tail_from;
    rep.tail_hi = far_end;

    const unsigned long p = f.model().ring()->p();
    const mpq_class sigma0 = frac(1, 2 * static_cast<long>(p) * (static_cast<long>(p) - 1));

    struct Pt {
        long u;
        mpq_class v;
    };
    std::vector<Pt> pts;
    bool have_min = false;
    for (const auto& [d, c] : f.coeffs()) {
        long u = negative_side ? -d : d;
        if (u < tail_from || u > far_end) continue;
        Valuation v = c.val();
        if (v.infinite) continue;
        pts.push_back({u, v.v});
        if (!have_min || v.v < rep.min_tail_val) {
            rep.min_tail_val = v.v;
            have_min = true;
        }
    }
    // map order runs by degree; on the T^{-1} side that is u descending
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.u < b.u; });

    if (pts.empty()) {
        // Nothing in the tail: converges trivially on the window.
        rep.slope = sigma0 * 2;
        rep.min_tail_val = mpq_class(f.model().ring()->working_digits());
        rep.anchor_u = tail_from;
        rep.anchor_v = rep.min_tail_val;
        rep.classification = Growth::Overconvergent;
        return rep;
    }

    // Lower convex hull over the tail points.
    std::vector<Pt> hull;
    for (const auto& q : pts) {
        while (hull.size() >= 2) {
            const Pt& a = hull[hull.size() - 2];
            const Pt& b = hull[hull.size() - 1];
            mpq_class cross = (b.v - a.v) * (q.u - a.u) - (q.v - a.v) * (b.u - a.u);
            if (cross < 0) break;
            hull.pop_back();
        }
        hull.push_back(q);
    }
    // Slope of the piecewise-linear hull across the right half of the tail:
    // long enough to smooth the s_p(k) wiggle and the dips at p-power
    // degrees, late enough to read the asymptotic direction.
    auto hull_at = [&hull](const mpq_class& u) -> mpq_class {
        if (u <= hull.front().u) return hull.front().v;
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            if (u <= hull[k + 1].u)
                return mpq_class(hull[k].v + (hull[k + 1].v - hull[k].v) * (u - hull[k].u) /
                                                 mpq_class(hull[k + 1].u - hull[k].u));
        }
        return hull.back().v;
    };
    if (hull.size() >= 2 && hull.back().u > hull.front().u) {
        mpq_class far(hull.back().u);
        mpq_class mid = (mpq_class(tail_from) + far) / 2;
        if (mid < hull.front().u) mid = hull.front().u;
        rep.slope = (far == mid) ? mpq_class(0)
                                 : (hull.back().v - hull_at(mid)) / (far - mid);
    } else {
        rep.slope = 0;
    }
    rep.anchor_u = hull.back().u;
    rep.anchor_v = hull.back().v;

    // Overconvergence needs the valuations to have actually grown: past 1
    // absolutely (bounded families like E_m hover below ~1 forever) and to
    // the level the measured slope yields by the tail start (bounded tails
    // with dips at p-power degrees would otherwise slip through).
    if (rep.slope > 0 && rep.min_tail_val > 1 &&
        2 * rep.min_tail_val >= rep.slope * tail_from)
        rep.classification = Growth::Overconvergent;
    else if (rep.slope <= -sigma0)
        rep.classification = Growth::Subunit;
    else
        rep.classification = Growth::UnitRadius;
    return rep;
}

namespace {

// Common one-sided recurrence support: returns +1 for support in T, -1 for
// support in T^{-1}; throws on mixed support.
template <class C>
int series_side(const Series<C>& f) {
    if (f.is_zero()) return +1;
    if (f.support_lo() >= 1) return +1;
    if (f.support_hi() <= -1) return -1;
    throw ValidationError("series operation requires one-sided support");
}

} // namespace

ESeries exp_series(const ESeries& f) {
    if (!CoeffOps<ExtElement>::is_zero(f.at(0)))
        throw ValidationError("exp_series requires zero constant term");
    const int s = series_side(f);
    const long extent = (s > 0) ? f.hi() : -f.lo();
    if (extent >= kWindowInf)
        throw WindowExhausted("exp_series needs a finite window on the support side");
    const RingPtr ring = f.model().ring();
    ESeries g(f.model(), s > 0 ? -kWindowInf : -extent, s > 0 ? extent : kWindowInf);
    g.set(0, ExtElement::one(ring));
    std::vector<ExtElement> gc(static_cast<size_t>(extent) + 1, ExtElement::zero(ring));
    gc[0] = ExtElement::one(ring);
    for (long u = 1; u <= extent; ++u) {
        ExtElement acc = ExtElement::zero(ring);
        for (long j = 1; j <= u; ++j) {
            ExtElement fj = f.at(s * j);
            if (fj.is_zero()) continue;
            acc = acc + fj.mul_long(j) * gc[static_cast<size_t>(u - j)];
        }
        gc[static_cast<size_t>(u)] = CoeffOps<ExtElement>::div_long(acc, u);
        g.set(s * u, gc[static_cast<size_t>(u)]);
    }
    return g;
}

QSeries exp_series(const QSeries& f, long hi) {
    if (f.at(0) != 0) throw ValidationError("exp_series requires zero constant term");
    QSeries g(mpq_class(0), -kWindowInf, hi);
    std::vector<mpq_class> gc(static_cast<size_t>(hi) + 1, mpq_class(0));
    gc[0] = 1;
    g.set(0, mpq_class(1));
    for (long u = 1; u <= hi; ++u) {
        mpq_class acc(0);
        for (long j = 1; j <= u; ++j) {
            mpq_class fj = f.at(j);
            if (fj == 0) continue;
            acc += fj * j * gc[static_cast<size_t>(u - j)];
        }
        acc /= u;
        acc.canonicalize();
        gc[static_cast<size_t>(u)] = acc;
        g.set(u, acc);
    }
    return g;
}

ESeries log_series(const ESeries& one_plus_g) {
    const RingPtr ring = one_plus_g.model().ring();
    ESeries g = one_plus_g - ESeries::constant(one_plus_g.model(), ExtElement::one(ring));
    if (!g.at(0).is_zero()) throw ValidationError("log_series requires constant term 1");
    if (g.is_zero()) return g;
    const int s = series_side(g);
    const long extent = (s > 0) ? g.hi() : -g.lo();
    if (extent >= kWindowInf)
        throw WindowExhausted("log_series needs a finite window on the support side");
    ESeries h(g.model(), s > 0 ? -kWindowInf : -extent, s > 0 ? extent : kWindowInf);
    std::vector<ExtElement> hc(static_cast<size_t>(extent) + 1, ExtElement::zero(ring));
    for (long u = 1; u <= extent; ++u) {
        ExtElement acc = ExtElement::zero(ring);
        for (long j = 1; j < u; ++j) {
            if (hc[static_cast<size_t>(j)].is_zero()) continue;
            ExtElement gv = g.at(s * (u - j));
            if (gv.is_zero()) continue;
            acc = acc + hc[static_cast<size_t>(j)].mul_long(j) * gv;
        }
        ExtElement hu = g.at(s * u) - CoeffOps<ExtElement>::div_long(acc, u);
        hc[static_cast<size_t>(u)] = hu;
        h.set(s * u, hu);
    }
    return h;
}

ESeries inverse_one_plus(const ESeries& one_plus_u) {
    const RingPtr ring = one_plus_u.model().ring();
    ExtElement c0 = one_plus_u.at(0);
    if (!eq(c0, ExtElement::one(ring)))
        throw DivisionWindowExhausted("series inverse requires constant term exactly 1");
    ESeries u = one_plus_u - ESeries::constant(one_plus_u.model(), ExtElement::one(ring));
    if (u.is_zero()) {
        ESeries r(one_plus_u.model(), one_plus_u.lo(), one_plus_u.hi());
        r.set(0, ExtElement::one(ring));
        return r;
    }
    const int s = series_side(u);
    const long extent = (s > 0) ? u.hi() : -u.lo();
    if (extent >= kWindowInf)
        throw DivisionWindowExhausted("series inverse needs a finite window");
    ESeries inv(u.model(), s > 0 ? -kWindowInf : -extent, s > 0 ? extent : kWindowInf);
    std::vector<ExtElement> ic(static_cast<size_t>(extent) + 1, ExtElement::zero(ring));
    ic[0] = ExtElement::one(ring);
    inv.set(0, ic[0]);
    for (long k = 1; k <= extent; ++k) {
        ExtElement acc = ExtElement::zero(ring);
        for (long j = 1; j <= k; ++j) {
            ExtElement uj = u.at(s * j);
            if (uj.is_zero()) continue;
            acc = acc + uj * ic[static_cast<size_t>(k - j)];
        }
        ic[static_cast<size_t>(k)] = -acc;
        inv.set(s * k, ic[static_cast<size_t>(k)]);
    }
    return inv;
}

} // namespace padic
