#include "padic/solvability.hpp"

#include <algorithm>

namespace padic {

ESeries RankOneOperator::g_series() const {
    ESeries g = g_series_no_a0();
    if (a0 != 0) g.set(0, ExtElement::from_rational(ring, a0));
    return g;
}

ESeries RankOneOperator::g_series_no_a0() const {
    ESeries g(ExtElement::zero(ring));
    for (const auto& [i, c] : coeffs)
        if (i != 0) g.set(i, c);
    return g;
}

RankOneOperator tensor(const RankOneOperator& a, const RankOneOperator& b) {
    if (a.ring != b.ring && !a.ring->compatible(*b.ring))
        throw ValidationError("tensor: operands over different rings");
    RankOneOperator r;
    r.ring = a.ring;
    r.a0 = a.a0 + b.a0;
    r.coeffs = a.coeffs;
    for (const auto& [i, c] : b.coeffs) {
        auto it = r.coeffs.find(i);
        if (it == r.coeffs.end())
            r.coeffs.emplace(i, c);
        else {
            ExtElement s = it->second + c;
            if (s.is_zero())
                r.coeffs.erase(it);
            else
                it->second = s;
        }
    }
    return r;
}

std::vector<ESeries> iterate_matrices(const RankOneOperator& op, long S) {
    if (S < 1) throw ValidationError("iterate_matrices: S >= 1 required");
    std::vector<ESeries> out;
    ESeries g1 = op.g_series().shifted(-1);
    out.push_back(g1);
    for (long s = 1; s < S; ++s) {
        const ESeries& prev = out.back();
        if (prev.window_empty()) throw WindowExhausted("iterate_matrices: window exhausted");
        out.push_back(prev.ddT() + prev * g1);
    }
    return out;
}

RayEstimate ray_estimate(const RankOneOperator& op, const mpq_class& r, long S) {
    if (S < 8) throw ValidationError("ray_estimate: S >= 8 required");
    const mpq_class omega_val = frac(1, static_cast<long>(op.ring->p()) - 1);
    ESeries g = op.g_series();
    if (g.is_zero()) return {r, false};

    GaussVal gv = gauss_val(g, r);
    if (!gv.v.infinite && gv.v.v < 0) {
        // |g|_rho > 1: Ray = omega rho |g|_rho^{-1} exactly.
        return {omega_val + r - gv.v.v, true};
    }

    std::vector<ESeries> gs = iterate_matrices(op, S);
    mpq_class best = r;
    for (long k = std::max<long>(S / 2, 1); k <= S; ++k) {
        const ESeries& gk = gs[static_cast<size_t>(k - 1)];
        if (gk.is_zero()) continue;
        GaussVal gvk = gauss_val(gk, r);
        if (gvk.v.infinite) continue;
        mpq_class cand =
            (mpq_class(vp_factorial(static_cast<unsigned long>(k), op.ring->p())) -
             gvk.v.v) /
            mpq_class(k);
        best = std::max(best, cand);
    }
    return {best, false};
}

namespace {

std::optional<mpz_class> tetration_capped(unsigned long q, unsigned long r) {
    mpz_class t(static_cast<long>(q));
    for (unsigned long i = 1; i < r; ++i) {
        if (mpz_sizeinbase(t.get_mpz_t(), 2) > 64) return std::nullopt; // q^t would explode
        if (t > 1000000) return std::nullopt;
        mpz_class nt;
        mpz_pow_ui(nt.get_mpz_t(), mpz_class(static_cast<long>(q)).get_mpz_t(), t.get_ui());
        t = nt;
        if (mpz_sizeinbase(t.get_mpz_t(), 2) > 1000000) return std::nullopt;
    }
    return t;
}

} // namespace

ModerateReport moderate(const mpq_class& a0, unsigned long p) {
    ModerateReport rep;
    mpq_class a = a0;
    a.canonicalize();
    const mpz_class den = a.get_den();
    rep.in_z = (den == 1);
    rep.in_zp = !mpz_divisible_ui_p(den.get_mpz_t(), p);
    if (!rep.in_zp) return rep;
    if (rep.in_z) {
        rep.frobenius_order = 1;
        rep.order_bound = 1;
        return rep;
    }
    // minimal h with (p^h - 1) a0 in Z: the order of p mod den.
    mpz_class pm(1);
    mpz_class pz(static_cast<long>(p));
    for (unsigned long h = 1; h <= 10000000UL; ++h) {
        pm = mod_reduce(pm * pz, den);
        if (pm == 1) {
            rep.frobenius_order = h;
            break;
        }
    }
    // tower bound prod over prime powers q^r || den of ([q]_r - 1)
    mpz_class b = den;
    mpz_class bound(1);
    bool bounded = true;
    for (mpz_class q(2); q * q <= b && bounded; ++q) {
        if (!mpz_divisible_p(b.get_mpz_t(), q.get_mpz_t())) continue;
        unsigned long rr = 0;
        while (mpz_divisible_p(b.get_mpz_t(), q.get_mpz_t())) {
            b /= q;
            ++rr;
        }
        auto t = tetration_capped(q.get_ui(), rr);
        if (!t) {
            bounded = false;
            break;
        }
        bound *= (*t - 1);
    }
    if (bounded && b > 1) {
        auto t = tetration_capped(static_cast<unsigned long>(b.get_ui()), 1);
        if (t)
            bound *= (*t - 1);
        else
            bounded = false;
    }
    if (bounded && bound > 0) rep.order_bound = bound;
    return rep;
}

namespace {

// Support exponents of |i| = n p^m with n prime to p.
std::pair<long, long> np_split(long i, unsigned long p) {
    long u = std::abs(i);
    long m = *vp(mpz_class(u), p);
    long n = u;
    for (long t = 0; t < m; ++t) n /= static_cast<long>(p);
    return {n, m};
}

// Extends a positive-side family until the integrality pattern stabilizes:
// once i + p^{m+1-i} v(lambda_i) >= m+1 + 1/(p-1) for every i <= m, all later
// entries stay integral (and >= omega).
bool positive_family_stable(const std::vector<Valuation>& vals, unsigned long p,
                            long m_next) {
    const mpq_class om = frac(1, static_cast<long>(p) - 1);
    for (long i = 0; i < static_cast<long>(vals.size()); ++i) {
        const Valuation& v = vals[static_cast<size_t>(i)];
        if (v.infinite) continue;
        mpq_class scale;
        // p^{m_next - i} may be huge; compare via logs when the valuation is
        // positive, and fail immediately on units.
        if (v.v == 0) return false;
        long ex = m_next - i;
        if (ex > 62) continue; // p^62 * (anything >= 1/e) certainly dominates
        mpz_class sc = pow_p(p, static_cast<unsigned long>(ex));
        mpq_class lhs = mpq_class(i) + mpq_class(sc) * v.v;
        if (lhs < mpq_class(m_next) + om) return false;
    }
    return true;
}

BlockReport solve_family_positive(const RankOneOperator& op, long n,
                                  const std::vector<long>& exps) {
    const RingPtr ring = op.ring;
    const unsigned long p = ring->p();
    long M = *std::max_element(exps.begin(), exps.end());

    BlockReport blk;
    blk.n = n;
    blk.M = M;

    mpq_class ninv = mpq_class(1) / mpq_class(n);
    std::vector<ExtElement> phi;
    auto phi_at = [&](long m) {
        long deg = n;
        for (long t = 0; t < m; ++t) deg *= static_cast<long>(p);
        auto it = op.coeffs.find(deg);
        if (it == op.coeffs.end()) return ExtElement::zero(ring);
        return it->second.mul_rational(ninv);
    };
    for (long m = 0; m <= M; ++m) phi.push_back(phi_at(m));
    blk.ghost_phi = phi;

    // unghost with stabilization-driven extension; always check at least one
    // index past the support (the first extension entry is where units fail)
    GhostVector<ExtElement> g{ExtElement::zero(ring), phi};
    const long hard_cap = M + 64;
    long m_top = M + 1;
    g.entries.push_back(phi_at(m_top));
    while (true) {
        auto r = try_unghost(g);
        if (!r.ok()) {
            blk.witness = r.fail;
            return blk;
        }
        std::vector<Valuation> vals;
        for (long i = 0; i < r.vec->len(); ++i) vals.push_back((*r.vec)[i].val());
        if (positive_family_stable(vals, p, m_top + 1)) {
            blk.lambda = *r.vec;
            blk.ghost_phi = g.entries; // includes the zero-extended part checked
            return blk;
        }
        if (m_top >= hard_cap)
            throw InsufficientPrecision("positive family did not stabilize");
        ++m_top;
        g.entries.push_back(phi_at(m_top)); // zero beyond support
    }
}

} // namespace

PositiveReport solve_positive(const RankOneOperator& op) {
    PositiveReport rep;
    const unsigned long p = op.ring->p();
    std::map<long, std::vector<long>> families;
    for (const auto& [i, c] : op.coeffs) {
        if (i <= 0) continue;
        if (c.is_zero()) continue;
        Valuation v = c.val();
        if (!v.infinite && v.v < 0) {
            rep.nonintegral_coefficient = i;
            rep.solvable = false;
            return rep;
        }
        auto [n, m] = np_split(i, p);
        families[n].push_back(m);
    }
    rep.solvable = true;
    for (const auto& [n, exps] : families) {
        BlockReport blk = solve_family_positive(op, n, exps);
        if (!blk.integral()) rep.solvable = false;
        rep.families.emplace(n, std::move(blk));
    }
    return rep;
}

StripResult strip_small_tail(const RankOneOperator& op, const mpq_class& r) {
    if (r < 0) throw ValidationError("strip_small_tail: radius valuation must be >= 0");
    const unsigned long p = op.ring->p();
    const mpq_class om = frac(1, static_cast<long>(p) - 1);
    StripResult out{RankOneOperator{op.ring, op.a0, {}}, {}, ESeries(ExtElement::zero(op.ring))};
    for (const auto& [i, c] : op.coeffs) {
        if (c.is_zero()) continue;
        bool strip = false;
        if (i < 0) {
            Valuation v = c.val();
            // value of a_i T^i / i at rho = p^{-r}; strict per exp convergence
            mpq_class t = v.v - mpq_class(*vp(mpz_class(i), p)) + mpq_class(i) * r;
            strip = t > om;
        }
        if (strip) {
            out.stripped.push_back(i);
            // log of the witness exponential: -a_i T^i / i
            out.witness_log.set(i, -CoeffOps<ExtElement>::div_long(c, i));
        } else {
            out.op.coeffs.emplace(i, c);
        }
    }
    return out;
}

namespace {

RankOneOperator raise_level(const RankOneOperator& op, long needed) {
    if (op.ring->has_tower() && op.ring->level() >= needed) return op;
    if (!op.ring->has_tower() && needed < 0) return op;
    if (!op.ring->has_tower())
        throw LevelRaiseRequired("needed level " + std::to_string(needed) +
                                 " but no Lubin-Tate series is attached");
    RingPtr target = make_tower(op.ring->lt(), needed, op.ring->budget());
    RankOneOperator out;
    out.ring = target;
    out.a0 = op.a0;
    for (const auto& [i, c] : op.coeffs) out.coeffs.emplace(i, embed(c, target));
    return out;
}

} // namespace

NegativeReport solve_negative(const RankOneOperator& op, std::optional<long> override_M) {
    const unsigned long p = op.ring->p();
    NegativeReport rep;
    rep.ring = op.ring;

    StripResult st = strip_small_tail(op, 0);
    rep.stripped = st.stripped;

    // group the surviving negative support by n and find the twist tops
    std::map<long, long> top; // n -> M
    for (const auto& [i, c] : st.op.coeffs) {
        if (i >= 0 || c.is_zero()) continue;
        Valuation v = c.val();
        if (!v.infinite && v.v < 0) {
            rep.nonintegral_coefficient = i;
            rep.solvable = false;
            return rep;
        }
        auto [n, m] = np_split(i, p);
        auto it = top.find(n);
        if (it == top.end())
            top[n] = m;
        else
            it->second = std::max(it->second, m);
    }
    rep.solvable = true;
    if (top.empty()) return rep;

    long max_M = 0;
    for (auto& [n, M] : top) {
        if (override_M) M = std::max(M, *override_M);
        max_M = std::max(max_M, M);
    }
    RankOneOperator w = raise_level(st.op, max_M);
    rep.ring = w.ring;

    for (const auto& [n, M] : top) {
        BlockReport blk;
        blk.n = n;
        blk.M = M;
        mpq_class ninv = mpq_class(-1) / mpq_class(n);
        std::vector<ExtElement> phi;
        for (long j = 0; j <= M; ++j) {
            long deg = -n;
            for (long t = 0; t < j; ++t) deg *= static_cast<long>(p);
            auto it = w.coeffs.find(deg);
            ExtElement a = (it == w.coeffs.end()) ? ExtElement::zero(w.ring) : it->second;
            // phi_j = -a_{-np^j} / (n pi_{M-j})
            phi.push_back(a.mul_rational(ninv) * pi_at(w.ring, M - j).inverse());
        }
        blk.ghost_phi = phi;
        GhostVector<ExtElement> g{ExtElement::zero(w.ring), phi};
        auto r = try_unghost(g);
        if (r.ok()) {
            blk.lambda = *r.vec;
            auto l = length(*r.vec);
            if (l) {
                blk.irregularity = n;
                for (long t = 0; t < *l; ++t) blk.irregularity *= static_cast<long>(p);
            }
        } else {
            blk.witness = r.fail;
            rep.solvable = false;
        }
        rep.blocks.emplace(n, std::move(blk));
    }

    // round trip: the assembled f^- must reproduce the operator
    if (rep.solvable) {
        std::map<long, ComonomialBlock> blocks;
        for (const auto& [n, blk] : rep.blocks) {
            long d = n;
            for (long t = 0; t < blk.M; ++t) d *= static_cast<long>(p);
            blocks.emplace(d, comonomial(*blk.lambda, d, blk.M));
        }
        RankOneOperator rebuilt = build_L(0, blocks, w.ring);
        for (const auto& [i, c] : w.coeffs) {
            if (i >= 0) continue;
            auto it = rebuilt.coeffs.find(i);
            ExtElement r2 = (it == rebuilt.coeffs.end()) ? ExtElement::zero(w.ring)
                                                         : it->second;
            if (!eq(r2, c))
                throw InternalError("solve_negative: build_L round trip mismatch at degree " +
                                    std::to_string(i));
        }
    }
    return rep;
}

SolvabilityReport solve(const RankOneOperator& op, std::optional<long> override_M) {
    SolvabilityReport rep;
    rep.a0 = op.a0;
    rep.a0_status = moderate(op.a0, op.ring->p());
    rep.positive = solve_positive(op);
    rep.negative = solve_negative(op, override_M);
    rep.solvable = rep.a0_status.in_zp && rep.positive.solvable && rep.negative.solvable;
    if (rep.solvable) {
        long irr = 0;
        for (const auto& [n, blk] : rep.negative.blocks)
            irr = std::max(irr, blk.irregularity);
        rep.irregularity = irr;
    }
    return rep;
}

long irregularity(const SolvabilityReport& rep) {
    if (!rep.solvable) throw NotSolvable("irregularity of a non-solvable operator");
    return rep.irregularity;
}

RankOneOperator build_L(const mpq_class& a0, const std::map<long, ComonomialBlock>& blocks,
                        const RingPtr& ring) {
    RankOneOperator op;
    op.ring = ring;
    op.a0 = a0;
    const unsigned long p = ring->p();
    for (const auto& [d, blk] : blocks) {
        if (blk.m > ring->level())
            throw LevelTooLow("build_L: block twist exceeds the ring level");
        GhostVector<ExtElement> phi = ghost(blk.lambda);
        for (long j = 0; j < phi.len(); ++j) {
            long deg = -blk.n;
            for (long t = 0; t < j; ++t) deg *= static_cast<long>(p);
            // a_{-np^j} = -n pi_{m-j} phi_j  (coefficients of g)
            ExtElement a =
                (pi_at(ring, blk.m - j) * phi.entries[static_cast<size_t>(j)])
                    .mul_long(-blk.n);
            if (a.is_zero()) continue;
            auto it = op.coeffs.find(deg);
            if (it == op.coeffs.end())
                op.coeffs.emplace(deg, a);
            else {
                ExtElement s = it->second + a;
                if (s.is_zero())
                    op.coeffs.erase(it);
                else
                    it->second = s;
            }
        }
    }
    return op;
}

ClassificationKey classify(const RankOneOperator& op, std::optional<long> override_M) {
    SolvabilityReport rep = solve(op, override_M);
    if (!rep.solvable) throw NotSolvable("classify requires a solvable operator");
    ClassificationKey key;
    // a0 mod Z, canonical representative in [0, 1)
    mpq_class a = rep.a0;
    a.canonicalize();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    key.a0_mod_z = a - mpq_class(fl);
    for (const auto& [n, blk] : rep.negative.blocks) {
        std::vector<unsigned long> res;
        bool seen = false;
        for (long i = 0; i < blk.lambda->len(); ++i) {
            unsigned long r = (*blk.lambda)[i].residue_fp();
            if (!seen && r == 0) continue; // strip leading zero residues (V-padding)
            seen = true;
            res.push_back(r);
        }
        if (!res.empty()) key.residues.emplace(n, std::move(res));
    }
    return key;
}

} // namespace padic
