#include "padic/witt.hpp"

#include "padic/errors.hpp"

namespace padic {

WittVector<ExtElement> canonical_lift(const std::vector<mpq_class>& h, const ExtElement& b,
                                      long m) {
    const RingPtr ring = b.ring();
    Valuation vb = b.val();
    if (!vb.infinite && !(vb.v > 0))
        throw ValidationError("canonical_lift: v(b) > 0 required");
    const auto& P = ring->lt().P;
    GhostVector<ExtElement> g{b, {}};
    ExtElement c = b;
    for (long j = 0; j <= m; ++j) {
        g.entries.push_back(eval_poly(h, c));
        if (j < m) c = eval_poly(P, c);
    }
    auto r = try_unghost(g);
    if (!r.ok()) throw InsufficientPrecision("canonical_lift: unghost failed");
    return *r.vec;
}

KeyProfile key_valuation_profile(const std::vector<mpq_class>& h, const ExtElement& b,
                                 long m) {
    WittVector<ExtElement> lift = canonical_lift(h, b, m);
    KeyProfile prof;
    if (!h.empty() && h[0] != 0) prof.r = *vp(h[0], b.ring()->p());
    for (long i = 0; i < lift.len(); ++i) {
        Valuation v = lift[i].val();
        bool unit = !v.infinite && v.v == 0;
        if (prof.r && i == *prof.r) {
            if (!unit) throw PatternViolation("entry r is not a unit");
        } else if (!prof.r || i < *prof.r) {
            if (unit) throw PatternViolation("entry below r is a unit");
        }
    }
    return prof;
}

namespace {

ESeries monomial(const ExtElement& model, long deg, const ExtElement& c) {
    ESeries s(model);
    s.set(deg, c);
    return s;
}

} // namespace

WittVector<ESeries> ComonomialBlock::expand() const {
    const long s = ambient_len - 1;
    ExtElement emodel = lambda.model();
    ESeries smodel(emodel);
    WittVector<ESeries> out = WittVector<ESeries>::zeros(smodel, ambient_len);
    if (m <= s) {
        for (long j = 0; j < lambda.len(); ++j) {
            long pj = 1;
            for (long t = 0; t < j; ++t) pj *= static_cast<long>(emodel.ring()->p());
            out[s - m + j] = monomial(emodel, -n * pj, lambda[j]);
        }
    } else {
        for (long j = 0; j < lambda.len(); ++j) {
            long pj = 1;
            for (long t = 0; t < m - s + j; ++t) pj *= static_cast<long>(emodel.ring()->p());
            out[j] = monomial(emodel, -n * pj, lambda[j]);
        }
    }
    return out;
}

ComonomialBlock comonomial(const WittVector<ExtElement>& lambda, long d, long s) {
    if (d <= 0) throw DegreeNotPositive("co-monomial degree must be positive");
    const unsigned long p = WittOps<ExtElement>::prime(lambda.model());
    long m = *vp(mpz_class(d), p);
    long n = d;
    for (long t = 0; t < m; ++t) n /= static_cast<long>(p);
    if (lambda.len() != m + 1)
        throw ValidationError("co-monomial lambda must have length v_p(d)+1");
    ComonomialBlock blk;
    blk.d = d;
    blk.n = n;
    blk.m = m;
    blk.ambient_len = s + 1;
    if (m <= s) {
        blk.lambda = lambda;
    } else {
        std::vector<ExtElement> kept(lambda.entries().begin() + (m - s),
                                     lambda.entries().end());
        blk.lambda = WittVector<ExtElement>(lambda.model(), std::move(kept));
    }
    return blk;
}

namespace {

ComonomialBlock block_from_ghost(long d, long n, long m, long s,
                                 const GhostVector<ExtElement>& g) {
    auto r = try_unghost(g);
    if (!r.ok()) {
        if (r.fail->v.infinite)
            throw InsufficientPrecision("decompose: block ghost not recoverable");
        throw NotIntegralError("decompose: block at degree " + std::to_string(d) +
                               " has entry " + std::to_string(r.fail->index) +
                               " of valuation " + to_string(r.fail->v));
    }
    ComonomialBlock blk;
    blk.d = d;
    blk.n = n;
    blk.m = m;
    blk.ambient_len = s + 1;
    blk.lambda = *r.vec;
    return blk;
}

} // namespace

Decomposition decompose(const WittVector<ESeries>& f) {
    const long s = f.len() - 1;
    if (s < 0) throw ValidationError("decompose of empty vector");
    const ExtElement emodel = f.model().model();
    const unsigned long p = emodel.ring()->p();

    GhostVector<ESeries> G = ghost(f);

    GhostVector<ExtElement> cst{emodel,
                                std::vector<ExtElement>(static_cast<size_t>(s) + 1,
                                                        ExtElement::zero(emodel.ring()))};
    GhostVector<ESeries> pos{f.model(), {}};
    for (long k = 0; k <= s; ++k) {
        // the slice is exactly zero off its support, so it keeps the full
        // knowledge window of the ghost entry
        const ESeries& gk = G.entries[static_cast<size_t>(k)];
        pos.entries.push_back(ESeries(emodel, gk.lo(), gk.hi()));
    }
    // per-degree block ghosts
    std::map<long, GhostVector<ExtElement>> bg;
    std::map<long, std::pair<long, long>> nm; // d -> (n, m)

    for (long k = 0; k <= s; ++k) {
        const ESeries& gk = G.entries[static_cast<size_t>(k)];
        for (const auto& [deg, c] : gk.coeffs()) {
            if (deg == 0) {
                cst.entries[static_cast<size_t>(k)] =
                    cst.entries[static_cast<size_t>(k)] + c;
            } else if (deg > 0) {
                pos.entries[static_cast<size_t>(k)].set(deg, c);
            } else {
                long u = -deg;
                long vu = *vp(mpz_class(u), p);
                long m = vu + (s - k);
                long d = u;
                for (long t = 0; t < s - k; ++t) d *= static_cast<long>(p);
                long n = u;
                for (long t = 0; t < vu; ++t) n /= static_cast<long>(p);
                long mu = std::min(s, m);
                long j = k - (s - mu);
                if (j < 0) throw InternalError("decompose: impossible slot");
                auto it = bg.find(d);
                if (it == bg.end()) {
                    GhostVector<ExtElement> g0{
                        emodel, std::vector<ExtElement>(static_cast<size_t>(mu) + 1,
                                                        ExtElement::zero(emodel.ring()))};
                    it = bg.emplace(d, std::move(g0)).first;
                    nm[d] = {n, m};
                }
                ExtElement phi = (m <= s) ? c.scale_pow_p(-(s - m)) : c;
                Valuation pv = phi.val();
                if (!pv.infinite && pv.v < 0)
                    throw NotIntegralError(
                        "decompose: ghost slot not divisible by the required p power");
                it->second.entries[static_cast<size_t>(j)] =
                    it->second.entries[static_cast<size_t>(j)] + phi;
            }
        }
    }

    Decomposition out;
    for (const auto& [d, g] : bg) {
        auto [n, m] = nm[d];
        out.blocks.emplace(d, block_from_ghost(d, n, m, s, g));
    }
    {
        auto r = try_unghost(cst);
        if (!r.ok()) throw InsufficientPrecision("decompose: constant part not integral");
        out.cst = *r.vec;
    }
    {
        auto r = try_unghost(pos);
        if (!r.ok()) throw InsufficientPrecision("decompose: positive part not integral");
        out.positive = *r.vec;
    }
    return out;
}

WittVector<ESeries> recompose(const Decomposition& dec, const ESeries& model, long len) {
    WittVector<ESeries> acc = WittVector<ESeries>::zeros(model, len);
    for (const auto& [d, blk] : dec.blocks) acc = witt_add(acc, blk.expand());
    if (dec.cst) {
        WittVector<ESeries> c = WittVector<ESeries>::zeros(model, len);
        for (long i = 0; i < len; ++i)
            c[i] = ESeries::constant(model.model(), (*dec.cst)[i]);
        acc = witt_add(acc, c);
    }
    if (dec.positive) acc = witt_add(acc, *dec.positive);
    return acc;
}

} // namespace padic
