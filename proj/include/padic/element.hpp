#ifndef PADIC_ELEMENT_HPP
#define PADIC_ELEMENT_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "padic/ring.hpp"

namespace padic {

/// Exact rational valuation normalized to v(p) = 1, or "zero to precision"
/// with the precision bound that was in force.
struct Valuation {
    bool infinite = false;
    mpq_class v;     // finite value; denominator divides e
    mpq_class bound; // for infinite: the element is O(p^bound)

    static Valuation finite(mpq_class value) { return {false, std::move(value), 0}; }
    static Valuation zero_at(mpq_class b) { return {true, 0, std::move(b)}; }
};

bool operator==(const Valuation& a, const Valuation& b);
std::string to_string(const Valuation& v);

/// Element of the coefficient ring, stored as num(x)/p^denom with num a
/// residue vector in the power basis of x, each entry known mod p^prec.
/// The Eisenstein basis makes the valuation min_i (v_p(num_i) + i/e) - denom
/// exact. Values are immutable; all operations return fresh elements.
class ExtElement {
public:
    ExtElement() = default;
    ExtElement(RingPtr ring, std::vector<mpz_class> coeffs, long prec, long denom = 0);

    static ExtElement zero(const RingPtr& ring);
    static ExtElement one(const RingPtr& ring);
    static ExtElement from_long(const RingPtr& ring, long n);
    /// Embeds a rational with p-coprime denominator.
    static ExtElement from_rational(const RingPtr& ring, const mpq_class& q);
    /// Reduces an arbitrary-degree polynomial in x (rational, p-integral
    /// coefficients) mod Phi_s.
    static ExtElement from_poly(const RingPtr& ring, const std::vector<mpq_class>& coeffs);

    const RingPtr& ring() const { return ring_; }
    long prec() const { return prec_; }
    long denom() const { return denom_; }
    const std::vector<mpz_class>& num() const { return num_; }
    /// Absolute precision of the value, in base-p digits: prec - denom.
    long abs_prec() const { return prec_ - denom_; }

    bool is_zero() const; // zero to precision
    Valuation val() const;

    friend ExtElement operator+(const ExtElement& a, const ExtElement& b);
    friend ExtElement operator-(const ExtElement& a, const ExtElement& b);
    friend ExtElement operator*(const ExtElement& a, const ExtElement& b);
    ExtElement operator-() const;

    ExtElement mul_long(long k) const;
    ExtElement mul_rational(const mpq_class& q) const; // q with p-coprime denominator
    /// Multiplies by p^k (k may be negative: exact denominator tracking;
    /// dividing consumes reported precision).
    ExtElement scale_pow_p(long k) const;
    ExtElement pow(unsigned long n) const;
    /// Multiplicative inverse; requires a known (finite) valuation.
    ExtElement inverse() const;

    /// Residue in F_p (valuation 0 -> unit residue, > 0 -> 0).
    unsigned long residue_fp() const;
    bool residue_is_zero() const { return residue_fp() == 0; }

    /// Truncates the report to at most `digits` absolute digits.
    ExtElement with_abs_prec(long digits) const;

    std::string str() const;

private:
    void normalize();

    RingPtr ring_;
    std::vector<mpz_class> num_;
    long prec_ = 0;
    long denom_ = 0;
};

/// a == b to the shared precision.
bool eq(const ExtElement& a, const ExtElement& b);

Valuation val(const ExtElement& a);

/// pi_j inside the ring's power basis; pi_at(level) is the class of x.
ExtElement pi_at(const RingPtr& ring, long j);

/// Re-expresses an element in a higher-level ring of the same tower
/// (x_old = P^(delta)(x_new)); plain Z_p elements embed as constants.
ExtElement embed(const ExtElement& a, const RingPtr& target);

/// Evaluates a polynomial with rational p-integral coefficients at a.
ExtElement eval_poly(const std::vector<mpq_class>& poly, const ExtElement& a);

} // namespace padic

#endif
