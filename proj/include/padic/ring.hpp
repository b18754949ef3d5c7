#ifndef PADIC_RING_HPP
#define PADIC_RING_HPP

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <vector>

#include "padic/lubin_tate.hpp"
#include "padic/rational.hpp"

namespace padic {

/// Absolute p-adic precision: public results carry at most n_digits base-p
/// digits, internal computation uses n_digits + guard_digits.
struct PrecisionBudget {
    unsigned long p = 2;
    long n_digits = 20;
    long guard_digits = 0;

    long working() const { return n_digits + guard_digits; }
};

/// Default guard covers exp denominators (v_p(k!) <= N_T/(p-1) over the
/// window) plus ghost-recovery divisions along the tower.
long default_guard(unsigned long p, long truncation, long level);

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// Coefficient ring: either Z_p itself or the level-s tower ring
/// O_{K_s} = Z_p[x]/(Phi_s), Phi_s = P^(s+1)/P^(s), e = p^s (p-1).
/// Immutable after construction.
class Ring {
public:
    static RingPtr zp(const PrecisionBudget& budget);
    static RingPtr tower(const LubinTateData& P, long level, const PrecisionBudget& budget);

    unsigned long p() const { return budget_.p; }
    long level() const { return level_; }
    long e() const { return e_; }
    bool has_tower() const { return lt_.has_value(); }
    const LubinTateData& lt() const;
    const PrecisionBudget& budget() const { return budget_; }
    long working_digits() const { return budget_.working(); }
    const mpz_class& working_modulus() const { return pW_; }
    mpz_class pow_p(long k) const;

    /// Phi_s with exact rational coefficients (monic, degree e).
    const std::vector<mpq_class>& modulus_exact() const { return phi_exact_; }
    /// Phi_s reduced mod p^working.
    const std::vector<mpz_class>& modulus_reduced() const { return phi_red_; }

    /// Coefficient vector of pi_j = P^(s-j)(x) in the power basis, 0 <= j <= level.
    const std::vector<mpz_class>& pi_coeffs(long j) const;

    bool compatible(const Ring& other) const;

private:
    Ring() = default;

    PrecisionBudget budget_;
    long level_ = 0;
    long e_ = 1;
    std::optional<LubinTateData> lt_;
    std::vector<mpq_class> phi_exact_;
    std::vector<mpz_class> phi_red_;
    mpz_class pW_;
    std::vector<std::vector<mpz_class>> pi_; // pi_[j] = coeffs of pi_j
};

/// Builds O_{K_s} for a polynomial Lubin-Tate series; asserts Phi_s Eisenstein.
RingPtr make_tower(const LubinTateData& P, long level, const PrecisionBudget& budget);

} // namespace padic

#endif
