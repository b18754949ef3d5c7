#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "padic/exponentials.hpp"

using namespace padic;
using namespace padic::testing;

namespace {

WittVector<ExtElement> wvec(const RingPtr& r, std::vector<ExtElement> e) {
    return WittVector<ExtElement>(ExtElement::zero(r), std::move(e));
}

bool series_eq(const ESeries& a, const ESeries& b) {
    ESeries d = a - b;
    if (d.window_empty()) return false;
    for (const auto& [deg, c] : d.coeffs())
        if (!c.is_zero()) return false;
    return true;
}

// equality of every coefficient to `digits` reported digits
bool series_close(const ESeries& a, const ESeries& b, long digits) {
    ESeries d = a - b;
    if (d.window_empty()) return false;
    for (const auto& [deg, c] : d.coeffs()) {
        Valuation v = c.val();
        if (!v.infinite && v.v < digits) return false;
    }
    return true;
}

long sp_digit_sum(unsigned long k, unsigned long p) {
    long s = 0;
    while (k) {
        s += static_cast<long>(k % p);
        k /= p;
    }
    return s;
}

} // namespace

TEST_CASE("gauss_val basics") {
    RingPtr r = tower(2, 0);
    SUBCASE("T^k -> k r") {
        ESeries f(ExtElement::zero(r));
        f.set(5, ExtElement::one(r));
        CHECK(gauss_val(f, frac(1, 3)).v.v == frac(5, 3));
    }
    SUBCASE("p + T at r = 0 -> 0") {
        ESeries f(ExtElement::zero(r));
        f.set(0, ExtElement::from_long(r, 2));
        f.set(1, ExtElement::one(r));
        CHECK(gauss_val(f, 0).v.v == 0);
    }
    SUBCASE("multiplicative when minima are uniquely attained") {
        ESeries f(ExtElement::zero(r)), g(ExtElement::zero(r));
        f.set(0, ExtElement::from_long(r, 2));
        f.set(1, ExtElement::one(r));
        g.set(0, ExtElement::one(r));
        g.set(1, ExtElement::from_long(r, 2));
        mpq_class rr = frac(1, 3);
        CHECK(gauss_val(f * g, rr).v.v == gauss_val(f, rr).v.v + gauss_val(g, rr).v.v);
    }
}

TEST_CASE("exp_series: exp(0) = 1 and exp/log round trips") {
    RingPtr r = tower(3, 0);
    ESeries z(ExtElement::zero(r), 0, 24);
    ESeries e = exp_series(z);
    CHECK(eq(e.at(0), ExtElement::one(r)));
    CHECK(e.coeffs().size() == 1);

    std::mt19937_64 rng(61);
    ESeries f(ExtElement::zero(r), 0, 24);
    for (long d = 1; d <= 6; ++d) f.set(d, random_elem(r, rng).mul_long(3));
    ESeries ef = exp_series(f);
    CHECK(series_eq(log_series(ef), f));
}

TEST_CASE("exp(pi_0 T): coefficient k has valuation s_p(k)/(p-1) exactly") {
    for (unsigned long p : {2UL, 3UL}) {
        RingPtr r = tower(p, 0, 20, 64);
        ESeries f(ExtElement::zero(r), 0, 50);
        f.set(1, pi_at(r, 0));
        ESeries e = exp_series(f);
        for (long k = 0; k <= 50; ++k) {
            mpq_class expect = frac(sp_digit_sum(static_cast<unsigned long>(k), p),
                                    static_cast<long>(p) - 1);
            Valuation v = e.at(k).val();
            REQUIRE(!v.infinite);
            CHECK(v.v == expect);
        }
    }
}

TEST_CASE("universal Artin-Hasse exponential") {
    SUBCASE("first coefficients are 1") {
        const QSeries& E = artin_hasse_universal(2, 8);
        CHECK(E.at(0) == 1);
        CHECK(E.at(1) == 1);
        CHECK(E.at(2) == 1); // 1/2! + 1/2 at p = 2
    }
    SUBCASE("matches the k!-division oracle") {
        for (unsigned long p : {2UL, 3UL, 5UL}) {
            const long N = 40;
            std::vector<mpq_class> f(N + 1, mpq_class(0));
            for (mpz_class pj(1); pj <= N; pj *= static_cast<long>(p))
                f[static_cast<size_t>(pj.get_si())] = mpq_class(1, pj.get_si());
            std::vector<mpq_class> acc(N + 1, mpq_class(0)), term(N + 1, mpq_class(0));
            acc[0] = 1;
            term[0] = 1;
            for (long k = 1; k <= N; ++k) {
                std::vector<mpq_class> nt(N + 1, mpq_class(0));
                for (long i = 0; i <= N; ++i) {
                    if (term[static_cast<size_t>(i)] == 0) continue;
                    for (long j = 1; i + j <= N; ++j)
                        nt[static_cast<size_t>(i + j)] +=
                            term[static_cast<size_t>(i)] * f[static_cast<size_t>(j)];
                }
                for (long i = 0; i <= N; ++i) {
                    nt[static_cast<size_t>(i)] /= k;
                    nt[static_cast<size_t>(i)].canonicalize();
                    acc[static_cast<size_t>(i)] += nt[static_cast<size_t>(i)];
                }
                term = nt;
            }
            const QSeries& E = artin_hasse_universal(p, N);
            for (long i = 0; i <= N; ++i) CHECK(E.at(i) == acc[static_cast<size_t>(i)]);
        }
    }
    SUBCASE("denominators coprime to p up to degree 60") {
        for (unsigned long p : {2UL, 3UL, 5UL}) {
            const QSeries& E = artin_hasse_universal(p, 60);
            for (const auto& [d, c] : E.coeffs())
                CHECK(!mpz_divisible_ui_p(c.get_den().get_mpz_t(), p));
        }
    }
}

TEST_CASE("E_of_witt: zero vector gives 1; group morphism; log identity") {
    std::mt19937_64 rng(67);
    RingPtr r = tower(3, 2, 12, 32);
    auto zero3 = WittVector<ExtElement>::zeros(ExtElement::zero(r), 3);
    ESeries one = E_of_witt(zero3, 1, +1, 32);
    CHECK(eq(one.at(0), ExtElement::one(r)));
    CHECK(one.coeffs().size() == 1);

    // E(-, T) is a morphism on W(B); at finite length the truncated sum
    // diverges from the product at degree p^{len}, so pad the entries far
    // enough for the window first.
    long L = 1;
    while (pow_p(3, static_cast<unsigned long>(L)) <= 32) ++L;
    auto pad = [&](WittVector<ExtElement> w) {
        std::vector<ExtElement> e = w.entries();
        e.resize(static_cast<size_t>(L) + 1, ExtElement::zero(r));
        return wvec(r, std::move(e));
    };
    auto lam = pad(wvec(r, {random_elem(r, rng), random_elem(r, rng), random_elem(r, rng)}));
    auto mu = pad(wvec(r, {random_elem(r, rng), random_elem(r, rng), random_elem(r, rng)}));
    CHECK(series_eq(E_of_witt(witt_add(lam, mu), 1, +1, 32),
                    E_of_witt(lam, 1, +1, 32) * E_of_witt(mu, 1, +1, 32)));

    ESeries lg = log_series(E_of_witt(lam, 1, +1, 32));
    auto phi = ghost(lam);
    for (const auto& [d, c] : lg.coeffs()) {
        long pj = 1, j = 0;
        while (pj < d) pj *= 3, ++j;
        if (pj == d && j <= L) {
            CHECK(eq(c, phi.entries[static_cast<size_t>(j)].scale_pow_p(-j)));
        } else {
            CHECK(c.is_zero());
        }
    }
}

TEST_CASE("pi_exponential: E_m via the universal-E route equals formal exp") {
    for (unsigned long p : {2UL, 3UL}) {
        RingPtr r = tower(p, 1, 12, 48);
        ESeries em = robba_E(r, 1, +1, 48);
        ESeries arg(ExtElement::zero(r), 0, 48);
        arg.set(1, pi_at(r, 1));
        arg.set(static_cast<long>(p), pi_at(r, 0).scale_pow_p(-1));
        CHECK(series_eq(em, exp_series(arg)));
    }
}

TEST_CASE("pi_exponential rules") {
    std::mt19937_64 rng(71);
    RingPtr r = tower(2, 2, 12, 48);
    auto lam = wvec(r, {random_elem(r, rng), random_elem(r, rng)});
    SUBCASE("e_d(lambda, T^p) = e_{pd}(V(lambda), T)") {
        ESeries lhs = pi_exponential(lam, 2, +1, 24).substituted(2).truncated(0, 48);
        ESeries rhs = pi_exponential(verschiebung(lam), 4, +1, 48);
        CHECK(series_eq(lhs, rhs.truncated(0, lhs.hi())));
    }
    SUBCASE("group morphism in lambda") {
        auto mu = wvec(r, {random_elem(r, rng), random_elem(r, rng)});
        CHECK(series_eq(pi_exponential(witt_add(lam, mu), 2, +1, 32),
                        pi_exponential(lam, 2, +1, 32) * pi_exponential(mu, 2, +1, 32)));
    }
    SUBCASE("values in 1 + pi_m T B[[T]]") {
        ESeries e = pi_exponential(lam, 2, +1, 32);
        CHECK(eq(e.at(0), ExtElement::one(r)));
        mpq_class vm = pi_at(r, 1).val().v;
        for (long d = 1; d <= 32; ++d) {
            Valuation v = e.at(d).val();
            CHECK((v.infinite || v.v >= vm));
        }
    }
    SUBCASE("e_{p^m}((1,0,...,0), T) = E_m(T)") {
        std::vector<ExtElement> one{ExtElement::one(r), ExtElement::zero(r)};
        CHECK(series_eq(pi_exponential(wvec(r, one), 2, +1, 32), robba_E(r, 1, +1, 32)));
    }
}

TEST_CASE("e_minus: transformation lemma, V-invariance, empty input") {
    std::mt19937_64 rng(73);
    RingPtr r = tower(2, 2, 12, 40);
    auto lam = wvec(r, {random_elem(r, rng), random_elem(r, rng)});
    auto blk = comonomial(lam, 2, 2);
    SUBCASE("single co-monomial: e_{p^s}(lambda T^{-d}, 1) = e_d(lambda, T^{-1})") {
        CHECK(series_eq(e_minus(blk.expand(), 40), pi_exponential(lam, 2, -1, 40)));
    }
    SUBCASE("invariant under V") {
        auto f = blk.expand();
        CHECK(series_eq(e_minus(f, 40), e_minus(verschiebung(f), 40)));
    }
    SUBCASE("f^- = 0 gives 1") {
        auto z = WittVector<ESeries>::zeros(ESeries(ExtElement::zero(r)), 3);
        ESeries one = e_minus(z, 40);
        CHECK(eq(one.at(0), ExtElement::one(r)));
        CHECK(one.coeffs().size() == 1);
    }
    SUBCASE("positive support is rejected") {
        auto f = blk.expand();
        ESeries bad = f[0];
        bad.set(1, ExtElement::one(r));
        WittVector<ESeries> g(ESeries(ExtElement::zero(r)), {bad, f[1], f[2]});
        CHECK_THROWS_AS(e_minus(g, 40), PositiveSupport);
    }
}

TEST_CASE("theta: trivial vector, overconvergence dichotomy") {
    SUBCASE("lambda = 0 gives 1") {
        RingPtr r = tower(2, 0, 12, 32);
        auto z = WittVector<ExtElement>::zeros(ExtElement::zero(r), 1);
        ESeries th = theta(z, 1, identity_frobenius(), 32);
        CHECK(eq(th.at(0), ExtElement::one(r)));
        for (const auto& [d, c] : th.coeffs())
            if (d != 0) CHECK(c.is_zero());
    }
    SUBCASE("w = p: overconvergent at m = 0") {
        for (unsigned long p : {2UL, 3UL}) {
            RingPtr r = tower(p, 0, 12, 96);
            std::vector<ExtElement> one{ExtElement::one(r)};
            ESeries th = theta(wvec(r, one), 1, identity_frobenius(), 96);
            GrowthReport rep = growth_slope(th, frac(1, 2));
            CHECK(rep.classification == Growth::Overconvergent);
            CHECK(rep.slope >= frac(1, 2 * static_cast<long>(p) * (static_cast<long>(p) - 1)));
        }
    }
    SUBCASE("w = 2p, p = 3: bounded non-growing tail") {
        LubinTateData P6 = lt_validate(3, {mpq_class(0), mpq_class(6), mpq_class(0),
                                           mpq_class(1)},
                                       mpq_class(6));
        PrecisionBudget b{3, 12, default_guard(3, 96, 0)};
        RingPtr r = make_tower(P6, 0, b);
        std::vector<ExtElement> one{ExtElement::one(r)};
        ESeries th = theta(wvec(r, one), 1, identity_frobenius(), 96);
        GrowthReport rep = growth_slope(th, frac(1, 2));
        CHECK(rep.classification != Growth::Overconvergent);
        CHECK(rep.min_tail_val < 1);
    }
}

TEST_CASE("theta computed two ways: ratio vs exp(-p pi_{m+1} T) e_{pd}([h_Frob], T)") {
    for (unsigned long p : {2UL, 3UL}) {
        RingPtr r = tower(p, 1, 10, 48);
        std::vector<ExtElement> one{ExtElement::one(r)};
        ESeries lhs = theta(wvec(r, one), 1, identity_frobenius(), 48);
        std::vector<mpq_class> h(r->lt().P.begin() + 1, r->lt().P.end());
        for (auto& c : h) c = -c;
        h[0] += static_cast<long>(p);
        auto lift = canonical_lift(h, pi_at(r, 1), 1);
        ESeries fac = pi_exponential(lift, static_cast<long>(p), +1, 48);
        ESeries arg(ExtElement::zero(r), 0, 48);
        arg.set(1, pi_at(r, 1).mul_long(-static_cast<long>(p)));
        ESeries rhs = (exp_series(arg) * fac).truncated(0, 48);
        CHECK(series_eq(lhs.truncated(0, rhs.hi()), rhs));
    }
}

TEST_CASE("eval_at_1: constant series") {
    RingPtr r = tower(2, 0, 10, 64);
    ESeries f(ExtElement::zero(r), 0, 64);
    f.set(0, ExtElement::one(r));
    GrowthReport rep = growth_slope(f, frac(1, 2));
    EvalAt1 ev = eval_at_1(f, rep, 10);
    CHECK(eq(ev.value, ExtElement::one(r)));
}

TEST_CASE("eval_at_1 of theta: inverse of the primitive p^{m+1}-th root") {
    SUBCASE("p = 2: theta_1((1), 1) = -1, square is 1") {
        RingPtr r = tower(2, 0, 10, 96);
        std::vector<ExtElement> one{ExtElement::one(r)};
        ESeries th = theta(wvec(r, one), 1, identity_frobenius(), 96);
        GrowthReport rep = growth_slope(th, frac(1, 2));
        EvalAt1 ev = eval_at_1(th, rep, 10);
        Valuation diff = (ev.value + ExtElement::one(r)).val();
        CHECK((diff.infinite || diff.v >= 10));
        Valuation sq = (ev.value * ev.value - ExtElement::one(r)).val();
        CHECK((sq.infinite || sq.v >= 10));
    }
    SUBCASE("p = 3: cube is 1 and the inverse tracks xi_0") {
        RingPtr r = tower(3, 0, 8, 160);
        std::vector<ExtElement> one{ExtElement::one(r)};
        ESeries th = theta(wvec(r, one), 1, identity_frobenius(), 160);
        GrowthReport rep = growth_slope(th, frac(1, 2));
        EvalAt1 ev = eval_at_1(th, rep, 8);
        ExtElement cube = ev.value.pow(3);
        Valuation cv = (cube - ExtElement::one(r)).val();
        CHECK((cv.infinite || cv.v >= 8));
        ExtElement xi = ev.value.inverse();
        Valuation dv = (xi - ExtElement::one(r) - pi_at(r, 0)).val();
        CHECK((dv.infinite || dv.v > frac(1, 2)));
    }
    SUBCASE("root order p^{m+1} at m = 1, p = 2, lambda over Z_p") {
        RingPtr r = tower(2, 1, 6, 192);
        auto lam = wvec(r, {ExtElement::one(r), ExtElement::from_long(r, 3)});
        ESeries th = theta(lam, 2, identity_frobenius(), 192);
        GrowthReport rep = growth_slope(th, frac(1, 2));
        EvalAt1 ev = eval_at_1(th, rep, 6);
        Valuation rv = (ev.value.pow(4) - ExtElement::one(r)).val();
        CHECK((rv.infinite || rv.v >= 6));
    }
}

TEST_CASE("growth_slope classification") {
    SUBCASE("exp(T) is subunit with slope about -1/(p-1)") {
        for (unsigned long p : {2UL, 3UL}) {
            RingPtr r = tower(p, 0, 12, 96);
            ESeries f(ExtElement::zero(r), 0, 64);
            f.set(1, ExtElement::one(r));
            GrowthReport rep = growth_slope(exp_series(f), frac(1, 2));
            CHECK(rep.classification == Growth::Subunit);
            CHECK(rep.slope < 0);
            CHECK(rep.slope <= -frac(1, 2 * (static_cast<long>(p) - 1)));
        }
    }
    SUBCASE("E_m(T) has unit radius") {
        RingPtr r = tower(2, 1, 12, 96);
        GrowthReport rep = growth_slope(robba_E(r, 1, +1, 96), frac(1, 2));
        CHECK(rep.classification == Growth::UnitRadius);
        CHECK(rep.min_tail_val >= 0);
    }
    SUBCASE("e_d with all entries of positive valuation is overconvergent") {
        RingPtr r = tower(3, 1, 12, 96);
        auto lam = wvec(r, {pi_at(r, 1), ExtElement::from_long(r, 3)});
        GrowthReport rep = growth_slope(pi_exponential(lam, 3, +1, 96), frac(1, 2));
        CHECK(rep.classification == Growth::Overconvergent);
    }
    SUBCASE("window shorter than 16 is refused") {
        RingPtr r = tower(2, 0, 12, 96);
        ESeries f(ExtElement::zero(r), 0, 10);
        f.set(1, ExtElement::one(r));
        CHECK_THROWS_AS(growth_slope(f, frac(1, 2)), WindowTooShort);
    }
}

TEST_CASE("dependence on pi: [1 + p]_P fixes pi_0; [2]_P does not") {
    for (unsigned long p : {2UL, 3UL}) {
        RingPtr r = tower(p, 0, 8, 32);
        long D = (r->budget().n_digits + 4) * (static_cast<long>(p) - 1) + 4;
        auto U = bracket(mpq_class(1 + static_cast<long>(p)), r->lt(), r->lt(), D);
        ExtElement pi0p = eval_poly(U, pi_at(r, 0));
        Valuation dv = (pi0p - pi_at(r, 0)).val();
        CHECK((dv.infinite || dv.v >= r->budget().n_digits));
        std::vector<ExtElement> g1{pi0p};
        std::vector<ExtElement> g2{pi_at(r, 0)};
        ESeries e1 = exp_from_ghost(g1, 1, +1, 32);
        ESeries e2 = exp_from_ghost(g2, 1, +1, 32);
        // the twisted generator agrees to the reported precision, so the
        // exponentials do too
        CHECK(series_close(e1, e2, r->budget().n_digits));
    }
    SUBCASE("u = 2 moves pi_0 and the ratio is not overconvergent (p = 3)") {
        RingPtr r = tower(3, 0, 8, 96);
        auto U = bracket(mpq_class(2), r->lt(), r->lt(), 40);
        ExtElement pi0p = eval_poly(U, pi_at(r, 0));
        CHECK(!eq(pi0p, pi_at(r, 0)));
        std::vector<ExtElement> g1{pi0p};
        std::vector<ExtElement> g2{pi_at(r, 0)};
        ESeries ratio = (exp_from_ghost(g1, 1, +1, 96) *
                         inverse_one_plus(exp_from_ghost(g2, 1, +1, 96)))
                            .truncated(0, 96);
        GrowthReport rep = growth_slope(ratio, frac(1, 2));
        CHECK(rep.classification != Growth::Overconvergent);
    }
}

TEST_CASE("independence of P: E_m / E_m^(Pt) = e([h_{P,Pt}(pi_m)], T) overconvergent") {
    for (unsigned long p : {2UL, 3UL}) {
        RingPtr r = tower(p, 1, 8, 64);
        LubinTateData Pt = lt_mult(p);
        long D = 2 * static_cast<long>(p) * (static_cast<long>(p) - 1) * 10 + 8;
        auto U = bracket(mpq_class(1), r->lt(), Pt, D);
        std::vector<mpq_class> h(U.size() - 1);
        for (size_t i = 1; i < U.size(); ++i) h[i - 1] = -U[i];
        h[0] += 1;
        CHECK(h[0] == 0);
        auto lift = canonical_lift(h, pi_at(r, 1), 1);
        for (long i = 0; i < lift.len(); ++i) {
            Valuation v = lift[i].val();
            CHECK((v.infinite || v.v > 0));
        }
        ESeries ratio = pi_exponential(lift, static_cast<long>(p), +1, 64);
        GrowthReport rep = growth_slope(ratio, frac(1, 2));
        CHECK(rep.classification == Growth::Overconvergent);
        // cross-check against the ratio built from the twisted tower; the
        // bracket degree D limits the evaluated generator to ~D/2 digits
        ExtElement pit1 = eval_poly(U, pi_at(r, 1));
        ExtElement pit0 = eval_poly(Pt.P, pit1);
        std::vector<ExtElement> gt{pit1, pit0};
        std::vector<ExtElement> gs{pi_at(r, 1), pi_at(r, 0)};
        ESeries lhs = (exp_from_ghost(gs, 1, +1, 40) *
                       inverse_one_plus(exp_from_ghost(gt, 1, +1, 40)))
                          .truncated(0, 40);
        CHECK(series_close(lhs, ratio.truncated(0, 40), 8));
    }
}

TEST_CASE("Frobenius-lift ratio e_d(lambda^(F), T^p)/e_d(lambda, T) grows when w = p") {
    std::mt19937_64 rng(103);
    RingPtr r = tower(2, 2, 10, 128);
    for (int t = 0; t < 3; ++t) {
        auto lam = wvec(r, {random_elem(r, rng), random_elem(r, rng)});
        // arbitrary lift of the residue p-th power
        std::vector<ExtElement> fl;
        for (long i = 0; i < lam.len(); ++i)
            fl.push_back(lam[i].pow(2) + random_elem(r, rng).scale_pow_p(1));
        ESeries num = pi_exponential(wvec(r, fl), 2, +1, 64).substituted(2);
        ESeries den = pi_exponential(lam, 2, +1, 128);
        ESeries ratio = (num * inverse_one_plus(den)).truncated(-kWindowInf, 128);
        GrowthReport rep = growth_slope(ratio, frac(1, 2));
        CHECK(rep.slope > 0);
        CHECK(rep.min_tail_val > 0);
    }
}
