#include "padic/exponentials.hpp"

#include <mutex>

namespace padic {

const QSeries& artin_hasse_universal(unsigned long p, long N_T) {
    static std::map<std::pair<unsigned long, long>, QSeries> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(p, N_T);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // k E_k = sum_{p^j <= k} E_{k - p^j}, from E' = (sum_j T^{p^j - 1}) E.
    std::vector<mpq_class> e(static_cast<size_t>(N_T) + 1, mpq_class(0));
    e[0] = 1;
    for (long k = 1; k <= N_T; ++k) {
        mpq_class acc(0);
        for (mpz_class pj(1); pj <= k; pj *= static_cast<long>(p))
            acc += e[static_cast<size_t>(k - pj.get_si())];
        acc /= k;
        acc.canonicalize();
        if (mpz_divisible_ui_p(acc.get_den().get_mpz_t(), p))
            throw IntegralityViolation("universal Artin-Hasse coefficient not p-integral");
        e[static_cast<size_t>(k)] = acc;
    }
    QSeries s(mpq_class(0), 0, N_T);
    for (long k = 0; k <= N_T; ++k) s.set(k, e[static_cast<size_t>(k)]);
    return cache.emplace(key, std::move(s)).first->second;
}

ESeries substituted_E(const ExtElement& c, long k, long hi) {
    if (k == 0) throw ValidationError("substituted_E: zero degree");
    const RingPtr ring = c.ring();
    const long cap = hi / std::abs(k);
    const QSeries& E = artin_hasse_universal(ring->p(), std::max<long>(cap, 0));
    ESeries out(c, k > 0 ? -kWindowInf : -hi, k > 0 ? hi : kWindowInf);
    ExtElement cp = ExtElement::one(ring);
    for (long i = 0; i <= cap; ++i) {
        if (i > 0) cp = cp * c;
        mpq_class q = E.at(i);
        if (q == 0) continue;
        out.set(k * i, cp.mul_rational(q));
    }
    return out;
}

ESeries E_of_witt(const WittVector<ExtElement>& lambda, long n, int sign, long hi) {
    if (n <= 0) throw ValidationError("E_of_witt: substitution degree must be positive");
    const RingPtr ring = lambda.model().ring();
    const long p = static_cast<long>(ring->p());
    ESeries acc(lambda.model(), sign > 0 ? -kWindowInf : -hi,
                sign > 0 ? hi : kWindowInf);
    acc.set(0, ExtElement::one(ring));
    long deg = n;
    for (long j = 0; j < lambda.len(); ++j) {
        if (deg > hi) break;
        if (!lambda[j].is_zero())
            acc = acc * substituted_E(lambda[j], sign > 0 ? deg : -deg, hi);
        deg *= p;
    }
    return acc;
}

ESeries exp_from_ghost(const std::vector<ExtElement>& psi, long n, int sign, long hi) {
    if (psi.empty()) throw ValidationError("exp_from_ghost: empty ghost");
    const RingPtr ring = psi.front().ring();
    const long p = static_cast<long>(ring->p());
    // length needed: all j with n p^j <= hi
    long L = 0;
    for (long deg = n; deg * p <= hi; deg *= p) ++L;
    L = std::max<long>(L, static_cast<long>(psi.size()) - 1);
    GhostVector<ExtElement> g{psi.front(), psi};
    for (long j = static_cast<long>(psi.size()); j <= L; ++j)
        g.entries.push_back(ExtElement::zero(ring));
    auto r = try_unghost(g);
    if (!r.ok())
        throw InsufficientPrecision(
            "exp_from_ghost: ghost recovery failed (invalid ghost or guard exhausted)");
    return E_of_witt(*r.vec, n, sign, hi);
}

ESeries pi_exponential(const WittVector<ExtElement>& lambda, long d, int sign, long hi) {
    if (d <= 0) throw DegreeNotPositive("pi-exponential needs d > 0");
    const RingPtr ring = lambda.model().ring();
    const unsigned long p = ring->p();
    long m = *vp(mpz_class(d), p);
    long n = d;
    for (long t = 0; t < m; ++t) n /= static_cast<long>(p);
    if (lambda.len() != m + 1)
        throw ValidationError("pi_exponential: lambda length must be v_p(d)+1");
    if (!ring->has_tower() || ring->level() < m)
        throw LevelTooLow("pi_exponential needs ring level >= v_p(d)");
    GhostVector<ExtElement> phi = ghost(lambda);
    std::vector<ExtElement> psi;
    for (long j = 0; j <= m; ++j)
        psi.push_back(pi_at(ring, m - j) * phi.entries[static_cast<size_t>(j)]);
    return exp_from_ghost(psi, n, sign, hi);
}

ESeries robba_E(const RingPtr& ring, long m, int sign, long hi) {
    std::vector<ExtElement> e(static_cast<size_t>(m) + 1, ExtElement::zero(ring));
    e[0] = ExtElement::one(ring);
    WittVector<ExtElement> one(ExtElement::zero(ring), std::move(e));
    long d = 1;
    for (long t = 0; t < m; ++t) d *= static_cast<long>(ring->p());
    return pi_exponential(one, d, sign, hi);
}

ESeries e_minus_blocks(const std::map<long, ComonomialBlock>& blocks, long hi) {
    if (blocks.empty()) throw ValidationError("e_minus: no blocks");
    const ExtElement model = blocks.begin()->second.lambda.model();
    const RingPtr ring = model.ring();
    ESeries acc(model, -hi, kWindowInf);
    acc.set(0, ExtElement::one(ring));
    for (const auto& [d, blk] : blocks) {
        if (blk.m > ring->level())
            throw LevelTooLow("e_minus: ring level below a block twist");
        acc = acc * pi_exponential(blk.lambda, blk.d, -1, hi);
    }
    return acc;
}

ESeries e_minus(const WittVector<ESeries>& f_minus, long hi) {
    for (long i = 0; i < f_minus.len(); ++i)
        if (f_minus[i].support_hi() >= 0 && !f_minus[i].is_zero())
            throw PositiveSupport("e_minus requires strictly negative support");
    Decomposition dec = decompose(f_minus);
    if (dec.blocks.empty()) {
        ESeries one(f_minus.model().model(), -hi, kWindowInf);
        one.set(0, ExtElement::one(f_minus.model().model().ring()));
        return one;
    }
    return e_minus_blocks(dec.blocks, hi);
}

CoeffFrobenius identity_frobenius() {
    return [](const ExtElement& x) { return x; };
}

ESeries theta(const WittVector<ExtElement>& lambda, long d, const CoeffFrobenius& frob,
              long hi) {
    const RingPtr ring = lambda.model().ring();
    const long p = static_cast<long>(ring->p());
    std::vector<ExtElement> mapped;
    for (long i = 0; i < lambda.len(); ++i) mapped.push_back(frob(lambda[i]));
    WittVector<ExtElement> fl(lambda.model(), std::move(mapped));
    ESeries num = pi_exponential(fl, d, +1, hi).substituted(p).truncated(-kWindowInf, hi);
    ESeries den = pi_exponential(lambda, d, +1, hi);
    ESeries ratio = (num * inverse_one_plus(den)).truncated(-kWindowInf, hi);
    return ratio;
}

EvalAt1 eval_at_1(const ESeries& f, const GrowthReport& rep, long target_digits) {
    if (rep.classification != Growth::Overconvergent)
        throw NotOverconvergent("eval_at_1 requires an overconvergent growth report");
    if (rep.slope <= 0) throw NotOverconvergent("eval_at_1 requires positive slope");
    long hi = 0;
    if (f.hi() < kWindowInf) hi = std::max(hi, std::abs(f.hi()));
    if (f.lo() > -kWindowInf) hi = std::max(hi, std::abs(f.lo()));
    if (hi == 0) throw WindowTooShort("eval_at_1 needs a finite window side");
    mpq_class needed_q = mpq_class(target_digits) / rep.slope;
    long needed = static_cast<long>(needed_q.get_num().get_si() /
                                    needed_q.get_den().get_si()) + 1;
    if (hi < needed)
        throw WindowTooShort("eval_at_1: window hi must be at least " +
                             std::to_string(needed));
    const RingPtr ring = f.model().ring();
    ExtElement sum = ExtElement::zero(ring);
    for (const auto& [deg, c] : f.coeffs()) sum = sum + c;
    mpq_class bound = rep.anchor_v + rep.slope * (hi + 1 - rep.anchor_u);
    return {sum, bound};
}

} // namespace padic
