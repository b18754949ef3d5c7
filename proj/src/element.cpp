#include "padic/element.hpp"

#include <algorithm>
#include <sstream>

#include "padic/errors.hpp"

namespace padic {

bool operator==(const Valuation& a, const Valuation& b) {
    if (a.infinite != b.infinite) return false;
    return a.infinite ? a.bound == b.bound : a.v == b.v;
}

std::string to_string(const Valuation& v) {
    if (v.infinite) return "+inf(>=" + v.bound.get_str() + ")";
    return v.v.get_str();
}

ExtElement::ExtElement(RingPtr ring, std::vector<mpz_class> coeffs, long prec, long denom)
    : ring_(std::move(ring)), num_(std::move(coeffs)), prec_(prec), denom_(denom) {
    if (prec_ < 1) throw InsufficientPrecision("element constructed with no digits left");
    num_.resize(static_cast<size_t>(ring_->e()), mpz_class(0));
    const mpz_class m = ring_->pow_p(prec_);
    for (auto& c : num_) c = mod_reduce(c, m);
    normalize();
}

void ExtElement::normalize() {
    if (denom_ == 0) return;
    long common = denom_;
    const unsigned long p = ring_->p();
    for (const auto& c : num_) {
        if (c == 0) continue;
        common = std::min(common, *vp(c, p));
        if (common == 0) return;
    }
    bool all_zero = std::all_of(num_.begin(), num_.end(),
                                [](const mpz_class& c) { return c == 0; });
    if (all_zero) {
        // O(p^prec)/p^denom = O(p^(prec-denom)).
        prec_ -= denom_;
        denom_ = 0;
        if (prec_ < 1) throw InsufficientPrecision("zero lost all digits to division");
        return;
    }
    if (common > 0) {
        const mpz_class d = ring_->pow_p(common);
        for (auto& c : num_) c /= d;
        prec_ -= common;
        denom_ -= common;
        if (prec_ < 1) throw InsufficientPrecision("division exhausted precision");
    }
}

ExtElement ExtElement::zero(const RingPtr& ring) {
    return ExtElement(ring, {}, ring->working_digits());
}

ExtElement ExtElement::one(const RingPtr& ring) {
    std::vector<mpz_class> c{mpz_class(1)};
    return ExtElement(ring, std::move(c), ring->working_digits());
}

ExtElement ExtElement::from_long(const RingPtr& ring, long n) {
    std::vector<mpz_class> c{mpz_class(n)};
    return ExtElement(ring, std::move(c), ring->working_digits());
}

ExtElement ExtElement::from_rational(const RingPtr& ring, const mpq_class& q) {
    // Split off the p-part of the denominator so negative-valuation scalars
    // (like 1/p) are representable.
    auto vden = vp(q.get_den(), ring->p());
    long k = vden.value_or(0);
    mpq_class qp = q * mpq_class(padic::pow_p(ring->p(), static_cast<unsigned long>(k)));
    qp.canonicalize();
    std::vector<mpz_class> c{rational_mod_pk(qp, ring->p(), ring->working_modulus())};
    return ExtElement(ring, std::move(c), ring->working_digits(), 0).scale_pow_p(-k);
}

ExtElement ExtElement::from_poly(const RingPtr& ring, const std::vector<mpq_class>& coeffs) {
    const long W = ring->working_digits();
    const mpz_class& M = ring->working_modulus();
    std::vector<mpz_class> c;
    c.reserve(coeffs.size());
    for (const auto& q : coeffs) c.push_back(rational_mod_pk(q, ring->p(), M));
    const long e = ring->e();
    if (static_cast<long>(c.size()) > e) {
        if (!ring->has_tower() && e == 1)
            throw ValidationError("plain Z_p element must be a single coefficient");
        const auto& phi = ring->modulus_reduced();
        for (long i = static_cast<long>(c.size()) - 1; i >= e; --i) {
            mpz_class top = c[static_cast<size_t>(i)];
            if (top == 0) continue;
            c[static_cast<size_t>(i)] = 0;
            for (long j = 0; j < e; ++j) {
                auto& t = c[static_cast<size_t>(i - e + j)];
                t = mod_reduce(t - top * phi[static_cast<size_t>(j)], M);
            }
        }
        c.resize(static_cast<size_t>(e));
    }
    return ExtElement(ring, std::move(c), W);
}

bool ExtElement::is_zero() const {
    return std::all_of(num_.begin(), num_.end(),
                       [](const mpz_class& c) { return c == 0; });
}

Valuation ExtElement::val() const {
    if (is_zero()) return Valuation::zero_at(mpq_class(prec_ - denom_));
    const unsigned long p = ring_->p();
    const long e = ring_->e();
    mpq_class best;
    bool have = false;
    for (long i = 0; i < static_cast<long>(num_.size()); ++i) {
        const auto& c = num_[static_cast<size_t>(i)];
        if (c == 0) continue;
        mpq_class v = mpq_class(*vp(c, p)) + frac(i, e);
        if (!have || v < best) {
            best = v;
            have = true;
        }
    }
    return Valuation::finite(best - denom_);
}

namespace {

void check_same_ring(const ExtElement& a, const ExtElement& b) {
    if (a.ring() != b.ring() && !a.ring()->compatible(*b.ring()))
        throw ValidationError("operands belong to different rings");
}

// Reduce a raw product vector (degree <= 2e-2) mod the monic modulus.
void reduce_mod_phi(std::vector<mpz_class>& c, const Ring& ring, const mpz_class& M) {
    const long e = ring.e();
    const auto& phi = ring.modulus_reduced();
    for (long i = static_cast<long>(c.size()) - 1; i >= e; --i) {
        mpz_class top = c[static_cast<size_t>(i)];
        if (top == 0) continue;
        c[static_cast<size_t>(i)] = 0;
        for (long j = 0; j < e; ++j) {
            auto& t = c[static_cast<size_t>(i - e + j)];
            t = mod_reduce(t - top * phi[static_cast<size_t>(j)], M);
        }
    }
    c.resize(static_cast<size_t>(e));
}

} // namespace

ExtElement operator+(const ExtElement& a, const ExtElement& b) {
    check_same_ring(a, b);
    const long D = std::max(a.denom(), b.denom());
    const long pa = a.prec() + (D - a.denom());
    const long pb = b.prec() + (D - b.denom());
    const long prec = std::min(pa, pb);
    const mpz_class sa = a.ring()->pow_p(D - a.denom());
    const mpz_class sb = b.ring()->pow_p(D - b.denom());
    std::vector<mpz_class> c(a.num().size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.num()[i] * sa + b.num()[i] * sb;
    return ExtElement(a.ring(), std::move(c), prec, D);
}

ExtElement operator-(const ExtElement& a, const ExtElement& b) { return a + (-b); }

ExtElement ExtElement::operator-() const {
    std::vector<mpz_class> c(num_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = -num_[i];
    return ExtElement(ring_, std::move(c), prec_, denom_);
}

ExtElement operator*(const ExtElement& a, const ExtElement& b) {
    check_same_ring(a, b);
    const long prec = std::min(a.prec(), b.prec());
    const mpz_class M = a.ring()->pow_p(prec);
    const size_t e = a.num().size();
    std::vector<mpz_class> c(2 * e - 1, mpz_class(0));
    for (size_t i = 0; i < e; ++i) {
        if (a.num()[i] == 0) continue;
        for (size_t j = 0; j < e; ++j) {
            if (b.num()[j] == 0) continue;
            c[i + j] += a.num()[i] * b.num()[j];
        }
    }
    for (auto& t : c) t = mod_reduce(t, M);
    reduce_mod_phi(c, *a.ring(), M);
    return ExtElement(a.ring(), std::move(c), prec, a.denom() + b.denom());
}

ExtElement ExtElement::mul_long(long k) const {
    std::vector<mpz_class> c(num_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = num_[i] * k;
    return ExtElement(ring_, std::move(c), prec_, denom_);
}

ExtElement ExtElement::mul_rational(const mpq_class& q) const {
    const mpz_class M = ring_->pow_p(prec_);
    mpz_class f = rational_mod_pk(q, ring_->p(), M);
    std::vector<mpz_class> c(num_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = num_[i] * f;
    return ExtElement(ring_, std::move(c), prec_, denom_);
}

ExtElement ExtElement::scale_pow_p(long k) const {
    if (k == 0) return *this;
    if (k < 0) return ExtElement(ring_, num_, prec_, denom_ - k);
    const long drop = std::min(denom_, k);
    const long up = k - drop;
    if (up == 0) return ExtElement(ring_, num_, prec_, denom_ - drop);
    const mpz_class f = ring_->pow_p(up);
    std::vector<mpz_class> c(num_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = num_[i] * f;
    return ExtElement(ring_, std::move(c), prec_ + up, denom_ - drop);
}

ExtElement ExtElement::pow(unsigned long n) const {
    ExtElement r = one(ring_);
    ExtElement base = *this;
    while (n > 0) {
        if (n & 1UL) r = r * base;
        base = base * base;
        n >>= 1UL;
    }
    return r;
}

namespace {

// x^{-1} = -q(x)/phi_0 where Phi(x) = x q(x) + phi_0 and phi_0 = p*(unit).
ExtElement x_inverse(const RingPtr& ring, long prec) {
    const long e = ring->e();
    const auto& phi = ring->modulus_reduced();
    std::vector<mpz_class> q(static_cast<size_t>(e));
    for (long i = 1; i <= e; ++i)
        q[static_cast<size_t>(i - 1)] = (i == e) ? mpz_class(1) : phi[static_cast<size_t>(i)];
    mpz_class u0;
    {
        mpz_class pz(ring->p());
        mpz_divexact(u0.get_mpz_t(), phi[0].get_mpz_t(), pz.get_mpz_t());
    }
    const mpz_class M = ring->pow_p(prec);
    ExtElement qx(ring, std::move(q), prec);
    ExtElement scaled = ExtElement(ring, {mod_reduce(-mod_inverse(u0, M), M)}, prec) * qx;
    return scaled.scale_pow_p(-1);
}

} // namespace

ExtElement ExtElement::inverse() const {
    Valuation v = val();
    if (v.infinite) throw InsufficientPrecision("inverse of zero-to-precision element");
    const long e = ring_->e();

    if (e == 1) {
        // Single coefficient c/p^d: c = p^t u, inverse = p^{d-t} u^{-1}.
        const mpz_class& c = num_[0];
        long t = *vp(c, ring_->p());
        mpz_class u;
        mpz_divexact(u.get_mpz_t(), c.get_mpz_t(), ring_->pow_p(t).get_mpz_t());
        long prec = prec_ - t;
        if (prec < 1) throw InsufficientPrecision("inverse exhausted precision");
        mpz_class uinv = mod_inverse(mod_reduce(u, ring_->pow_p(prec)), ring_->pow_p(prec));
        return ExtElement(ring_, {uinv}, prec, 0).scale_pow_p(denom_ - t);
    }

    // a = x^t * unit with t = e * v(numerator); invert both factors.
    ExtElement a(ring_, num_, prec_, 0);
    mpq_class te = (v.v + denom_) * e;
    if (te.get_den() != 1) throw InternalError("valuation denominator does not divide e");
    const long t = static_cast<long>(te.get_num().get_si());

    ExtElement unit = a;
    ExtElement xinv = one(ring_);
    if (t > 0) {
        xinv = x_inverse(ring_, prec_);
        unit = a * xinv.pow(static_cast<unsigned long>(t));
    }
    Valuation uv = unit.val();
    if (uv.infinite || uv.v != 0) throw InternalError("unit part does not have valuation 0");

    // Newton iteration y <- y(2 - unit*y); error valuation doubles per step.
    mpz_class seed = mod_inverse(mpz_class(unit.residue_fp()), mpz_class(ring_->p()));
    ExtElement y(ring_, {seed}, unit.prec());
    ExtElement two = from_long(ring_, 2);
    for (int it = 0; it < 64; ++it) {
        ExtElement err = one(ring_) - unit * y;
        if (err.is_zero()) break;
        y = y * (two - unit * y);
    }
    ExtElement res = (t > 0) ? y * xinv.pow(static_cast<unsigned long>(t)) : y;
    // (num/p^d)^{-1} = p^d * num^{-1}
    return res.scale_pow_p(denom_);
}

unsigned long ExtElement::residue_fp() const {
    if (denom_ != 0) throw ValidationError("residue of a non-integral element");
    Valuation v = val();
    if (v.infinite || v.v > 0) return 0;
    if (v.v < 0) throw ValidationError("residue of a non-integral element");
    mpz_class r = mod_reduce(num_[0], mpz_class(ring_->p()));
    return r.get_ui();
}

ExtElement ExtElement::with_abs_prec(long digits) const {
    long target = digits + denom_;
    if (target >= prec_) return *this;
    if (target < 1) throw InsufficientPrecision("requested precision not available");
    return ExtElement(ring_, num_, target, denom_);
}

std::string ExtElement::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < num_.size(); ++i) {
        if (i) os << ", ";
        os << num_[i].get_str();
    }
    os << "] / p^" << denom_ << " + O(p^" << (prec_ - denom_) << ")";
    return os.str();
}

bool eq(const ExtElement& a, const ExtElement& b) { return (a - b).is_zero(); }

Valuation val(const ExtElement& a) { return a.val(); }

ExtElement pi_at(const RingPtr& ring, long j) {
    return ExtElement(ring, ring->pi_coeffs(j), ring->working_digits());
}

ExtElement embed(const ExtElement& a, const RingPtr& target) {
    if (a.ring() == target) return a;
    if (a.ring()->p() != target->p()) throw ValidationError("embed: prime mismatch");
    if (a.denom() != 0) throw ValidationError("embed: element must be integral");
    const long prec = std::min(a.prec(), target->working_digits());
    if (!a.ring()->has_tower()) {
        return ExtElement(target, {a.num()[0]}, prec);
    }
    if (!target->has_tower() || target->level() < a.ring()->level() ||
        a.ring()->lt().P != target->lt().P)
        throw ValidationError("embed: target is not a higher level of the same tower");
    // x_old = pi_{old level} inside the target ring; Horner in x_old.
    ExtElement xold = pi_at(target, a.ring()->level());
    ExtElement acc = ExtElement::zero(target);
    for (long i = static_cast<long>(a.num().size()) - 1; i >= 0; --i) {
        acc = acc * xold;
        acc = acc + ExtElement(target, {a.num()[static_cast<size_t>(i)]}, prec);
    }
    return acc.with_abs_prec(prec);
}

ExtElement eval_poly(const std::vector<mpq_class>& poly, const ExtElement& a) {
    ExtElement acc = ExtElement::zero(a.ring());
    for (long i = static_cast<long>(poly.size()) - 1; i >= 0; --i) {
        acc = acc * a;
        if (poly[static_cast<size_t>(i)] != 0)
            acc = acc + ExtElement::from_rational(a.ring(), poly[static_cast<size_t>(i)]);
    }
    return acc;
}

} // namespace padic
