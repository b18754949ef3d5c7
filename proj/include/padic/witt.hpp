#ifndef PADIC_WITT_HPP
#define PADIC_WITT_HPP

#include <map>
#include <optional>
#include <vector>

#include "padic/series.hpp"

namespace padic {

template <class R>
struct WittOps;

template <>
struct WittOps<ExtElement> {
    static ExtElement zero_like(const ExtElement& m) { return ExtElement::zero(m.ring()); }
    static ExtElement one_like(const ExtElement& m) { return ExtElement::one(m.ring()); }
    static bool is_zero(const ExtElement& a) { return a.is_zero(); }
    static ExtElement add(const ExtElement& a, const ExtElement& b) { return a + b; }
    static ExtElement sub(const ExtElement& a, const ExtElement& b) { return a - b; }
    static ExtElement mul(const ExtElement& a, const ExtElement& b) { return a * b; }
    static ExtElement neg(const ExtElement& a) { return -a; }
    static ExtElement pow(const ExtElement& a, unsigned long n) { return a.pow(n); }
    static ExtElement mul_long(const ExtElement& a, long n) { return a.mul_long(n); }
    static ExtElement scale_pow_p(const ExtElement& a, long k) { return a.scale_pow_p(k); }
    static Valuation min_val(const ExtElement& a) { return a.val(); }
    static bool residue_zero(const ExtElement& a) {
        Valuation v = a.val();
        return v.infinite || v.v > 0;
    }
    static unsigned long prime(const ExtElement& a) { return a.ring()->p(); }
};

template <>
struct WittOps<ESeries> {
    static ESeries zero_like(const ESeries& m) { return ESeries(m.model(), m.lo(), m.hi()); }
    static ESeries one_like(const ESeries& m) {
        return ESeries::constant(m.model(), ExtElement::one(m.model().ring()));
    }
    static bool is_zero(const ESeries& a) { return a.is_zero(); }
    static ESeries add(const ESeries& a, const ESeries& b) { return a + b; }
    static ESeries sub(const ESeries& a, const ESeries& b) { return a - b; }
    static ESeries mul(const ESeries& a, const ESeries& b) { return a * b; }
    static ESeries neg(const ESeries& a) { return -a; }
    static ESeries pow(const ESeries& a, unsigned long n) { return a.pow(n); }
    static ESeries mul_long(const ESeries& a, long n) { return a.mul_long(n); }
    static ESeries scale_pow_p(const ESeries& a, long k) {
        return a.map([k](const ExtElement& c) { return c.scale_pow_p(k); });
    }
    static Valuation min_val(const ESeries& a) {
        bool have = false;
        mpq_class best;
        for (const auto& [d, c] : a.coeffs()) {
            Valuation v = c.val();
            if (v.infinite) continue;
            if (!have || v.v < best) {
                best = v.v;
                have = true;
            }
        }
        if (!have)
            return Valuation::zero_at(mpq_class(a.model().ring()->working_digits()));
        return Valuation::finite(best);
    }
    static bool residue_zero(const ESeries& a) {
        for (const auto& [d, c] : a.coeffs()) {
            Valuation v = c.val();
            if (!v.infinite && !(v.v > 0)) return false;
        }
        return true;
    }
    static unsigned long prime(const ESeries& a) { return a.model().ring()->p(); }
};

/// Integrality failure surfaced as data: the solvability criterion consumes
/// exactly this signal.
struct NotIntegral {
    long index = 0;
    Valuation v;
};

/// Finite-length Witt vector (lambda_0, ..., lambda_m) over a coefficient
/// ring; W_m is closed under the ring operations below.
template <class R>
class WittVector {
public:
    WittVector() = default; // empty; assign before use
    WittVector(R model, std::vector<R> entries)
        : model_(std::move(model)), e_(std::move(entries)) {}

    static WittVector zeros(const R& model, long len) {
        std::vector<R> v(static_cast<size_t>(len), WittOps<R>::zero_like(model));
        return WittVector(model, std::move(v));
    }

    long len() const { return static_cast<long>(e_.size()); }
    const R& operator[](long i) const { return e_[static_cast<size_t>(i)]; }
    R& operator[](long i) { return e_[static_cast<size_t>(i)]; }
    const std::vector<R>& entries() const { return e_; }
    const R& model() const { return model_; }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!WittOps<R>::is_zero(x)) return false;
        return true;
    }

private:
    R model_;
    std::vector<R> e_;
};

template <class R>
struct GhostVector {
    R model;
    std::vector<R> entries;
    long len() const { return static_cast<long>(entries.size()); }
};

template <class R>
struct UnghostResult {
    std::optional<WittVector<R>> vec;
    std::optional<NotIntegral> fail;
    bool ok() const { return vec.has_value(); }
};

/// phi_j = sum_{i<=j} p^i lambda_i^{p^(j-i)}.
template <class R>
GhostVector<R> ghost(const WittVector<R>& w) {
    GhostVector<R> g{w.model(), {}};
    const unsigned long p = WittOps<R>::prime(w.model());
    std::vector<R> pw; // lambda_i^{p^(j-i)}, updated by p-th powers
    for (long i = 0; i < w.len(); ++i) pw.push_back(w[i]);
    for (long j = 0; j < w.len(); ++j) {
        // raise previous powers once more
        for (long i = 0; i < j; ++i) pw[static_cast<size_t>(i)] =
            WittOps<R>::pow(pw[static_cast<size_t>(i)], p);
        R acc = WittOps<R>::zero_like(w.model());
        for (long i = 0; i <= j; ++i)
            acc = WittOps<R>::add(acc,
                                  WittOps<R>::scale_pow_p(pw[static_cast<size_t>(i)], i));
        g.entries.push_back(std::move(acc));
    }
    return g;
}

/// Inverse of the ghost map; recovering lambda_j divides by p^j, and a
/// recovered entry of negative valuation is reported, not thrown.
template <class R>
UnghostResult<R> try_unghost(const GhostVector<R>& g) {
    const unsigned long p = WittOps<R>::prime(g.model);
    std::vector<R> lam;
    std::vector<R> pw;
    for (long j = 0; j < g.len(); ++j) {
        for (long i = 0; i < j; ++i) pw[static_cast<size_t>(i)] =
            WittOps<R>::pow(pw[static_cast<size_t>(i)], p);
        R acc = g.entries[static_cast<size_t>(j)];
        for (long i = 0; i < j; ++i)
            acc = WittOps<R>::sub(acc,
                                  WittOps<R>::scale_pow_p(pw[static_cast<size_t>(i)], i));
        R lj = WittOps<R>::scale_pow_p(acc, -j);
        Valuation v = WittOps<R>::min_val(lj);
        if (!v.infinite && v.v < 0) {
            UnghostResult<R> r;
            r.fail = NotIntegral{j, v};
            return r;
        }
        lam.push_back(lj);
        pw.push_back(lam.back());
    }
    UnghostResult<R> r;
    r.vec = WittVector<R>(g.model, std::move(lam));
    return r;
}

template <class R>
WittVector<R> unghost(const GhostVector<R>& g) {
    auto r = try_unghost(g);
    if (!r.ok())
        throw NotIntegralError("entry " + std::to_string(r.fail->index) +
                               " has valuation " + to_string(r.fail->v));
    return *r.vec;
}

template <class R>
GhostVector<R> ghost_add(const GhostVector<R>& a, const GhostVector<R>& b) {
    GhostVector<R> g{a.model, {}};
    for (long j = 0; j < a.len(); ++j)
        g.entries.push_back(WittOps<R>::add(a.entries[static_cast<size_t>(j)],
                                            b.entries[static_cast<size_t>(j)]));
    return g;
}

template <class R>
GhostVector<R> ghost_mul(const GhostVector<R>& a, const GhostVector<R>& b) {
    GhostVector<R> g{a.model, {}};
    for (long j = 0; j < a.len(); ++j)
        g.entries.push_back(WittOps<R>::mul(a.entries[static_cast<size_t>(j)],
                                            b.entries[static_cast<size_t>(j)]));
    return g;
}

namespace detail {
template <class R>
WittVector<R> unghost_or_escalate(const GhostVector<R>& g, const char* who) {
    auto r = try_unghost(g);
    if (!r.ok())
        throw InternalError(std::string(who) +
                            ": ghost arithmetic lost integrality (guard digits exhausted)");
    return *r.vec;
}
} // namespace detail

template <class R>
WittVector<R> witt_add(const WittVector<R>& a, const WittVector<R>& b) {
    if (a.len() != b.len()) throw ValidationError("witt_add: length mismatch");
    return detail::unghost_or_escalate(ghost_add(ghost(a), ghost(b)), "witt_add");
}

template <class R>
WittVector<R> witt_mul(const WittVector<R>& a, const WittVector<R>& b) {
    if (a.len() != b.len()) throw ValidationError("witt_mul: length mismatch");
    return detail::unghost_or_escalate(ghost_mul(ghost(a), ghost(b)), "witt_mul");
}

template <class R>
WittVector<R> witt_neg(const WittVector<R>& a) {
    GhostVector<R> g = ghost(a);
    for (auto& x : g.entries) x = WittOps<R>::neg(x);
    return detail::unghost_or_escalate(g, "witt_neg");
}

template <class R>
WittVector<R> witt_sub(const WittVector<R>& a, const WittVector<R>& b) {
    return witt_add(a, witt_neg(b));
}

template <class R>
WittVector<R> witt_mul_long(const WittVector<R>& a, long n) {
    GhostVector<R> g = ghost(a);
    for (auto& x : g.entries) x = WittOps<R>::mul_long(x, n);
    return detail::unghost_or_escalate(g, "witt_mul_long");
}

/// F: ghost shift-down, length m+1 -> m.
template <class R>
WittVector<R> frobenius(const WittVector<R>& w) {
    if (w.len() < 2) throw ValidationError("frobenius needs length >= 2");
    GhostVector<R> g = ghost(w);
    GhostVector<R> s{g.model, std::vector<R>(g.entries.begin() + 1, g.entries.end())};
    auto r = try_unghost(s);
    if (!r.ok()) throw InsufficientPrecision("frobenius: unghost failed");
    return *r.vec;
}

/// V: prepend a zero entry (exact), length m+1 -> m+2.
template <class R>
WittVector<R> verschiebung(const WittVector<R>& w) {
    std::vector<R> e;
    e.push_back(WittOps<R>::zero_like(w.model()));
    for (long i = 0; i < w.len(); ++i) e.push_back(w[i]);
    return WittVector<R>(w.model(), std::move(e));
}

/// l(r) = m - k with k the first entry nonzero mod p; nullopt encodes -inf.
template <class R>
std::optional<long> length(const WittVector<R>& w) {
    for (long k = 0; k < w.len(); ++k)
        if (!WittOps<R>::residue_zero(w[k])) return w.len() - 1 - k;
    return std::nullopt;
}

// ---- canonical lifts [h(b)] ----------------------------------------------

/// [h(b)]: the Witt vector with ghost <h(b), h(P(b)), ..., h(P^(m)(b))>.
WittVector<ExtElement> canonical_lift(const std::vector<mpq_class>& h, const ExtElement& b,
                                      long m);

struct KeyProfile {
    std::optional<long> r; // v_p(h_0); nullopt when h_0 = 0
};

/// r = v_p(h(0)) and the key-lemma valuation pattern on [h(b)]:
/// entries below r are non-units, entry r is a unit.
KeyProfile key_valuation_profile(const std::vector<mpq_class>& h, const ExtElement& b, long m);

// ---- co-monomials and the W_s(E) decomposition ----------------------------

/// A co-monomial of degree -d, d = n p^m: lambda placed at T-degrees
/// -n, -np, ..., -d in the last min(s,m)+1 slots of W_s.
struct ComonomialBlock {
    long d = 0, n = 0, m = 0;
    long ambient_len = 0; // s + 1
    WittVector<ExtElement> lambda;

    WittVector<ESeries> expand() const;
};

/// Builds the ambient co-monomial from lambda of length v_p(d)+1 (entries
/// beyond the ambient length are dropped per the definition).
ComonomialBlock comonomial(const WittVector<ExtElement>& lambda, long d, long s);

struct Decomposition {
    std::map<long, ComonomialBlock> blocks;
    std::optional<WittVector<ExtElement>> cst;
    std::optional<WittVector<ESeries>> positive;
};

/// Unique decomposition of W_s(Laurent) into co-monomial blocks, a constant
/// part and a positive part; computed on ghost components (distinct blocks
/// occupy disjoint (position, degree) slots).
Decomposition decompose(const WittVector<ESeries>& f);

/// Witt sum of all parts expanded back into the ambient ring.
WittVector<ESeries> recompose(const Decomposition& dec, const ESeries& model, long len);

} // namespace padic

#endif
