#include "padic/lubin_tate.hpp"

#include <algorithm>

#include "padic/element.hpp"
#include "padic/errors.hpp"

namespace padic {

LubinTateData lt_validate(unsigned long p, std::vector<mpq_class> P, mpq_class w,
                          bool truncated_series) {
    if (!is_prime(p)) throw ValidationError("p is not prime");
    auto vw = vp(w, p);
    if (!vw || *vw != 1) throw NotLubinTate("w is not a uniformizer of Z_p (v_p(w) != 1)");
    while (!P.empty() && P.back() == 0) P.pop_back();
    if (P.size() < static_cast<size_t>(p) + 1)
        throw NotLubinTate("series too short: needs degree >= p");
    // P = wX mod X^2
    if (P[0] != 0) throw NotLubinTate("congruence mod X^2 fails at coefficient 0");
    if (P[1] != w) throw NotLubinTate("congruence mod X^2 fails at coefficient 1");
    // P = X^p mod w, coefficientwise
    for (size_t i = 0; i < P.size(); ++i) {
        mpq_class c = P[i] - (i == p ? 1 : 0);
        if (c == 0) continue;
        auto v = vp(c, p);
        if (!v || *v < 1)
            throw NotLubinTate("congruence mod w fails at coefficient " + std::to_string(i));
    }
    LubinTateData d;
    d.p = p;
    d.w = std::move(w);
    d.P = std::move(P);
    d.truncated_series = truncated_series;
    return d;
}

bool iso_test(const LubinTateData& P, const LubinTateData& Pt) {
    if (P.p != Pt.p) return false;
    return P.w == Pt.w;
}

// ---- univariate helpers over Q ---------------------------------------------

namespace {

using QPoly = std::vector<mpq_class>; // c_0 .. c_deg

QPoly qp_trunc_mul(const QPoly& a, const QPoly& b, long N) {
    QPoly r(std::min<size_t>(a.size() + b.size() - 1, static_cast<size_t>(N) + 1),
            mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= static_cast<size_t>(N); ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// f(g) truncated to degree N; g(0) = 0 expected.
QPoly qp_compose(const QPoly& f, const QPoly& g, long N) {
    QPoly r{f.empty() ? mpq_class(0) : f.back()};
    for (long i = static_cast<long>(f.size()) - 2; i >= 0; --i) {
        r = qp_trunc_mul(r, g, N);
        if (r.empty()) r.push_back(mpq_class(0));
        r[0] += f[static_cast<size_t>(i)];
    }
    return r;
}

mpq_class qp_coeff(const QPoly& f, long k) {
    if (k < 0 || k >= static_cast<long>(f.size())) return mpq_class(0);
    return f[static_cast<size_t>(k)];
}

} // namespace

std::vector<mpq_class> bracket(const mpq_class& a, const LubinTateData& P,
                               const LubinTateData& Pt, long degree) {
    if (P.p != Pt.p) throw ValidationError("bracket: prime mismatch");
    if (P.w != Pt.w) throw ValidationError("bracket: uniformizer mismatch");
    if (degree < 1) throw ValidationError("bracket: degree must be >= 1");
    const unsigned long p = P.p;
    const mpq_class& w = P.w;

    QPoly U(static_cast<size_t>(degree) + 1, mpq_class(0));
    U[1] = a;
    for (long r = 2; r <= degree; ++r) {
        // residual E = U(P) - Pt(U) is zero below degree r
        QPoly UP = qp_compose(U, P.P, degree);
        QPoly PtU = qp_compose(Pt.P, U, degree);
        mpq_class Er = qp_coeff(UP, r) - qp_coeff(PtU, r);
        if (Er == 0) continue;
        mpq_class den = w - pow_q(w, r);
        auto vden = vp(den, p);
        if (!vden || *vden != 1)
            throw LinearStepSingular("bracket: homogeneous step denominator is not p exactly");
        mpq_class h = Er / den;
        h.canonicalize();
        auto vh = vp(h, p);
        if (vh && *vh < 0)
            throw LinearStepSingular("bracket: correction is not p-integral");
        U[static_cast<size_t>(r)] = h;
    }
    return U;
}

// ---- formal group law ------------------------------------------------------

mpq_class FormalGroupLaw::coeff(long i, long j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? mpq_class(0) : it->second;
}

void FormalGroupLaw::set(long i, long j, const mpq_class& c) {
    if (c == 0)
        terms_.erase({i, j});
    else
        terms_[{i, j}] = c;
}

namespace {

using BTerms = std::map<std::pair<long, long>, mpq_class>;

BTerms bv_mul(const BTerms& a, const BTerms& b, long N) {
    BTerms r;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            long i = ka.first + kb.first, j = ka.second + kb.second;
            if (i + j > N) continue;
            auto key = std::make_pair(i, j);
            auto it = r.find(key);
            if (it == r.end())
                r[key] = va * vb;
            else {
                it->second += va * vb;
                if (it->second == 0) r.erase(it);
            }
        }
    return r;
}

// f(G) for univariate f, bivariate G (G(0,0) = 0), truncated to total degree N.
BTerms bv_compose(const QPoly& f, const BTerms& G, long N) {
    BTerms r;
    if (!f.empty() && f.back() != 0) r[{0, 0}] = f.back();
    for (long i = static_cast<long>(f.size()) - 2; i >= 0; --i) {
        r = bv_mul(r, G, N);
        if (f[static_cast<size_t>(i)] != 0) {
            auto it = r.find({0, 0});
            if (it == r.end())
                r[{0, 0}] = f[static_cast<size_t>(i)];
            else {
                it->second += f[static_cast<size_t>(i)];
                if (it->second == 0) r.erase(it);
            }
        }
    }
    return r;
}

// G(P(X), P(Y)) truncated: substitute univariate P on both slots.
BTerms bv_substitute_both(const BTerms& G, const QPoly& P, long N) {
    // powers of P(X) as univariate polys in X, reused for Y by symmetry
    std::vector<QPoly> powx{QPoly{mpq_class(1)}};
    long maxdeg = 0;
    for (const auto& [k, v] : G) maxdeg = std::max({maxdeg, k.first, k.second});
    for (long t = 1; t <= maxdeg; ++t)
        powx.push_back(qp_trunc_mul(powx.back(), P, N));
    BTerms r;
    for (const auto& [k, v] : G) {
        const QPoly& px = powx[static_cast<size_t>(k.first)];
        const QPoly& py = powx[static_cast<size_t>(k.second)];
        for (long i = 0; i < static_cast<long>(px.size()); ++i) {
            if (px[static_cast<size_t>(i)] == 0) continue;
            for (long j = 0; j < static_cast<long>(py.size()); ++j) {
                if (py[static_cast<size_t>(j)] == 0) continue;
                if (i + j > N) continue;
                mpq_class c = v * px[static_cast<size_t>(i)] * py[static_cast<size_t>(j)];
                auto key = std::make_pair(i, j);
                auto it = r.find(key);
                if (it == r.end())
                    r[key] = c;
                else {
                    it->second += c;
                    if (it->second == 0) r.erase(it);
                }
            }
        }
    }
    return r;
}

} // namespace

FormalGroupLaw group_law(const LubinTateData& P, long total_degree) {
    if (total_degree < 2) throw ValidationError("group_law: total degree must be >= 2");
    const unsigned long p = P.p;
    const mpq_class& w = P.w;
    const long N = total_degree;

    BTerms G;
    G[{1, 0}] = 1;
    G[{0, 1}] = 1;
    for (long r = 2; r <= N; ++r) {
        BTerms PG = bv_compose(P.P, G, N);
        BTerms GPP = bv_substitute_both(G, P.P, N);
        // homogeneous degree-r part of the residual
        BTerms Er;
        for (const auto& [k, v] : PG)
            if (k.first + k.second == r) Er[k] = v;
        for (const auto& [k, v] : GPP) {
            if (k.first + k.second != r) continue;
            auto it = Er.find(k);
            if (it == Er.end())
                Er[k] = -v;
            else {
                it->second -= v;
                if (it->second == 0) Er.erase(it);
            }
        }
        if (Er.empty()) continue;
        mpq_class den = pow_q(w, r) - w; // G += Er/(w^r - w) wait: H = -Er/(w - w^r)
        auto vden = vp(den, p);
        if (!vden || *vden != 1)
            throw LinearStepSingular("group_law: homogeneous step denominator is not p exactly");
        for (const auto& [k, v] : Er) {
            mpq_class h = v / den;
            h.canonicalize();
            auto vh = vp(h, p);
            if (vh && *vh < 0)
                throw LinearStepSingular("group_law: correction is not p-integral");
            auto it = G.find(k);
            if (it == G.end())
                G[k] = h;
            else {
                it->second += h;
                if (it->second == 0) G.erase(it);
            }
        }
    }

    FormalGroupLaw law(N);
    for (const auto& [k, v] : G) law.set(k.first, k.second, v);
    return law;
}

FormalGroupLaw group_law_residual(const LubinTateData& P, const FormalGroupLaw& G) {
    const long N = G.total_degree();
    BTerms g;
    for (const auto& [k, v] : G.terms()) g[k] = v;
    BTerms PG = bv_compose(P.P, g, N);
    BTerms GPP = bv_substitute_both(g, P.P, N);
    FormalGroupLaw res(N);
    for (const auto& [k, v] : PG) res.set(k.first, k.second, v);
    for (const auto& [k, v] : GPP) res.set(k.first, k.second, res.coeff(k.first, k.second) - v);
    return res;
}

ExtElement torsion_equiv(const ExtElement& x, const LubinTateData& P,
                         const LubinTateData& Pt) {
    Valuation v = x.val();
    if (v.infinite || !(v.v > 0)) throw ValidationError("torsion_equiv: v(x) > 0 required");
    const RingPtr ring = x.ring();
    long target = std::min<long>(ring->budget().n_digits + 2, ring->working_digits());
    mpq_class dq = mpq_class(target) / v.v;
    long D = static_cast<long>(dq.get_num().get_si() / dq.get_den().get_si()) + 2;
    if (D > 2000)
        throw WindowTooShort("torsion_equiv: bracket degree " + std::to_string(D) +
                             " exceeds the supported window");
    std::vector<mpq_class> U = bracket(mpq_class(1), P, Pt, D);
    ExtElement y = eval_poly(U, x);
    Valuation dv = (y - x).val();
    if (!dv.infinite && dv.v < 2 * v.v)
        throw InternalError("torsion_equiv: v([1](x) - x) < 2 v(x)");
    return y;
}

} // namespace padic
