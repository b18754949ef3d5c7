#ifndef PADIC_SERIES_HPP
#define PADIC_SERIES_HPP

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>

#include "padic/element.hpp"
#include "padic/errors.hpp"

namespace padic {

inline constexpr long kWindowInf = 1L << 40;

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<mpq_class> {
    static mpq_class zero(const mpq_class&) { return mpq_class(0); }
    static bool is_zero(const mpq_class& c) { return c == 0; }
    static mpq_class add(const mpq_class& a, const mpq_class& b) { return a + b; }
    static mpq_class neg(const mpq_class& a) { return -a; }
    static mpq_class mul(const mpq_class& a, const mpq_class& b) { return a * b; }
    static mpq_class mul_long(const mpq_class& a, long k) { return a * k; }
    static mpq_class div_long(const mpq_class& a, long k) {
        mpq_class r = a / mpq_class(k);
        r.canonicalize();
        return r;
    }
};

template <>
struct CoeffOps<ExtElement> {
    static ExtElement zero(const ExtElement& model) { return ExtElement::zero(model.ring()); }
    static bool is_zero(const ExtElement& c) { return c.is_zero(); }
    static ExtElement add(const ExtElement& a, const ExtElement& b) { return a + b; }
    static ExtElement neg(const ExtElement& a) { return -a; }
    static ExtElement mul(const ExtElement& a, const ExtElement& b) { return a * b; }
    static ExtElement mul_long(const ExtElement& a, long k) { return a.mul_long(k); }
    static ExtElement div_long(const ExtElement& a, long k) {
        unsigned long p = a.ring()->p();
        long t = *vp(mpz_class(k), p);
        mpz_class u = mpz_class(k) / pow_p(p, static_cast<unsigned long>(t));
        mpq_class uq(u);
        return a.scale_pow_p(-t).mul_rational(mpq_class(1) / uq);
    }
};

/// Truncated Laurent series: coefficients stored sparsely inside an
/// inclusive knowledge window [lo, hi]; absent degrees inside the window are
/// zero to precision, degrees outside the window are unknown. Windows
/// combine tightly under arithmetic.
template <class C>
class Series {
public:
    using Ops = CoeffOps<C>;

    explicit Series(C model, long lo = -kWindowInf, long hi = kWindowInf)
        : model_(std::move(model)), lo_(lo), hi_(hi) {}

    static Series constant(C model, C value) {
        Series s(std::move(model));
        s.set(0, std::move(value));
        return s;
    }

    long lo() const { return lo_; }
    long hi() const { return hi_; }
    const C& model() const { return model_; }
    const std::map<long, C>& coeffs() const { return c_; }
    bool window_empty() const { return lo_ > hi_; }

    void set(long d, C value) {
        if (d < lo_ || d > hi_) return;
        if (Ops::is_zero(value))
            c_.erase(d);
        else
            c_[d] = std::move(value);
    }

    C at(long d) const {
        auto it = c_.find(d);
        if (it != c_.end()) return it->second;
        return Ops::zero(model_);
    }

    bool is_zero() const { return c_.empty(); }

    long support_lo() const { return c_.empty() ? kWindowInf : c_.begin()->first; }
    long support_hi() const { return c_.empty() ? -kWindowInf : c_.rbegin()->first; }

    // Lowest/highest degree at which a nonzero coefficient could live:
    // inside an infinite knowledge window only the stored support counts.
    long eff_lo() const { return lo_ == -kWindowInf ? support_lo() : lo_; }
    long eff_hi() const { return hi_ == kWindowInf ? support_hi() : hi_; }

    Series truncated(long lo, long hi) const {
        Series r(model_, std::max(lo, lo_), std::min(hi, hi_));
        for (const auto& [d, v] : c_)
            if (d >= r.lo_ && d <= r.hi_) r.c_[d] = v;
        return r;
    }

    Series shifted(long k) const { // multiply by T^k
        Series r(model_, clamp_add(lo_, k), clamp_add(hi_, k));
        for (const auto& [d, v] : c_) r.c_[d + k] = v;
        return r;
    }

    /// T -> T^k substitution, k != 0 (negative reverses the support).
    Series substituted(long k) const {
        if (k == 0) throw ValidationError("substitution exponent must be nonzero");
        long a = clamp_mul(lo_, k), b = clamp_mul(hi_, k);
        Series r(model_, std::min(a, b), std::max(a, b));
        for (const auto& [d, v] : c_) r.c_[d * k] = v;
        return r;
    }

    Series operator-() const {
        Series r(model_, lo_, hi_);
        for (const auto& [d, v] : c_) r.c_[d] = Ops::neg(v);
        return r;
    }

    friend Series operator+(const Series& x, const Series& y) {
        Series r(x.model_, std::max(x.lo_, y.lo_), std::min(x.hi_, y.hi_));
        for (const auto& [d, v] : x.c_)
            if (d >= r.lo_ && d <= r.hi_) r.c_[d] = v;
        for (const auto& [d, v] : y.c_) {
            if (d < r.lo_ || d > r.hi_) continue;
            auto it = r.c_.find(d);
            if (it == r.c_.end())
                r.c_[d] = v;
            else {
                it->second = Ops::add(it->second, v);
                if (Ops::is_zero(it->second)) r.c_.erase(it);
            }
        }
        return r;
    }

    friend Series operator-(const Series& x, const Series& y) { return x + (-y); }

    friend Series operator*(const Series& x, const Series& y) {
        // knowledge windows combine tightly: the unknown degrees of one
        // factor, paired with the extreme possibly-nonzero degrees of the
        // other, bound where the product stays known
        long lx = (x.lo_ == -kWindowInf) ? -kWindowInf : clamp_add(x.lo_, y.eff_hi());
        long ly = (y.lo_ == -kWindowInf) ? -kWindowInf : clamp_add(y.lo_, x.eff_hi());
        long lo = std::max(lx, ly);
        long hx = (x.hi_ == kWindowInf) ? kWindowInf : clamp_add(x.hi_, y.eff_lo());
        long hy = (y.hi_ == kWindowInf) ? kWindowInf : clamp_add(y.hi_, x.eff_lo());
        long hi = std::min(hx, hy);
        Series r(x.model_, lo, hi);
        if (x.c_.empty() || y.c_.empty()) return r;
        for (const auto& [dx, vx] : x.c_) {
            for (const auto& [dy, vy] : y.c_) {
                long d = dx + dy;
                if (d < r.lo_ || d > r.hi_) continue;
                C prod = Ops::mul(vx, vy);
                auto it = r.c_.find(d);
                if (it == r.c_.end())
                    r.c_[d] = std::move(prod);
                else {
                    it->second = Ops::add(it->second, prod);
                    if (Ops::is_zero(it->second)) r.c_.erase(it);
                }
            }
        }
        return r;
    }

    Series mul_coeff(const C& k) const {
        Series r(model_, lo_, hi_);
        for (const auto& [d, v] : c_) {
            C prod = Ops::mul(v, k);
            if (!Ops::is_zero(prod)) r.c_[d] = std::move(prod);
        }
        return r;
    }

    Series mul_long(long k) const {
        Series r(model_, lo_, hi_);
        if (k == 0) return r;
        for (const auto& [d, v] : c_) {
            C prod = Ops::mul_long(v, k);
            if (!Ops::is_zero(prod)) r.c_[d] = std::move(prod);
        }
        return r;
    }

    /// d/dT: degree i coefficient becomes i*c_i at degree i-1.
    Series ddT() const {
        Series r(model_, clamp_add(lo_, -1), clamp_add(hi_, -1));
        for (const auto& [d, v] : c_) {
            if (d == 0) continue;
            C t = Ops::mul_long(v, d);
            if (!Ops::is_zero(t)) r.c_[d - 1] = std::move(t);
        }
        return r;
    }

    /// T d/dT (the derivation used throughout).
    Series theta_op() const {
        Series r(model_, lo_, hi_);
        for (const auto& [d, v] : c_) {
            if (d == 0) continue;
            C t = Ops::mul_long(v, d);
            if (!Ops::is_zero(t)) r.c_[d] = std::move(t);
        }
        return r;
    }

    Series pow(unsigned long n) const {
        Series acc = constant(model_, one_like());
        Series base = *this;
        while (n > 0) {
            if (n & 1UL) acc = acc * base;
            n >>= 1UL;
            if (n) base = base * base;
        }
        return acc;
    }

    template <class F>
    Series map(F&& f) const {
        Series r(model_, lo_, hi_);
        for (const auto& [d, v] : c_) {
            C t = f(v);
            if (!Ops::is_zero(t)) r.c_[d] = std::move(t);
        }
        return r;
    }

private:
    static long clamp_add(long a, long b) {
        if (a >= kWindowInf || b >= kWindowInf) return kWindowInf;
        if (a <= -kWindowInf || b <= -kWindowInf) return -kWindowInf;
        long s = a + b;
        return std::clamp(s, -kWindowInf, kWindowInf);
    }
    static long clamp_mul(long a, long k) {
        if (a >= kWindowInf) return k > 0 ? kWindowInf : -kWindowInf;
        if (a <= -kWindowInf) return k > 0 ? -kWindowInf : kWindowInf;
        return std::clamp(a * k, -kWindowInf, kWindowInf);
    }

    C one_like() const;

    C model_;
    long lo_, hi_;
    std::map<long, C> c_;
};

template <>
inline mpq_class Series<mpq_class>::one_like() const {
    return mpq_class(1);
}
template <>
inline ExtElement Series<ExtElement>::one_like() const {
    return ExtElement::one(model_.ring());
}

using QSeries = Series<mpq_class>;
using ESeries = Series<ExtElement>;

/// Gauss valuation min_i (v(a_i) + i*r) over the stored window; r is the
/// valuation height of the test radius (r = -log_p rho, so r > 0 is the
/// sub-unit disk and r = 0 the unit circle). Also reports whether the
/// minimum sits on the window boundary (truncation-sensitive).
struct GaussVal {
    Valuation v;
    bool boundary = false;
};
GaussVal gauss_val(const ESeries& f, const mpq_class& r);

enum class Growth { Overconvergent, UnitRadius, Subunit };

/// Finite-window proxy for radius-of-convergence dichotomies: hull slope of
/// (i, v(a_i)) over the tail plus the minimal tail valuation.
/// Overconvergent: slope >= 1/(2p(p-1)) and min tail > 0 (threshold is a
/// calibration constant). Subunit: negative slope and negative tail minimum.
struct GrowthReport {
    long tail_lo = 0, tail_hi = 0;
    mpq_class slope;
    mpq_class min_tail_val;
    long anchor_u = 0;     // hull vertex the slope chord starts from
    mpq_class anchor_v;
    Growth classification = Growth::UnitRadius;
};
GrowthReport growth_slope(const ESeries& f, const mpq_class& tail_fraction);

std::string growth_name(Growth g);

/// Formal exp of a one-sided series with zero constant term.
ESeries exp_series(const ESeries& f);
QSeries exp_series(const QSeries& f, long hi);

/// Formal log of 1 + g, g with zero constant term, one-sided.
ESeries log_series(const ESeries& one_plus_g);

/// 1 / (1 + u) with u(0) = 0, one-sided.
ESeries inverse_one_plus(const ESeries& one_plus_u);

} // namespace padic

#endif
