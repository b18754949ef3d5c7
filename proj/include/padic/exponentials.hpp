#ifndef PADIC_EXPONENTIALS_HPP
#define PADIC_EXPONENTIALS_HPP

#include <functional>

#include "padic/witt.hpp"

namespace padic {

/// E(T) = exp(sum_j T^{p^j}/p^j) over exact rationals to degree N_T; every
/// denominator is coprime to p (asserted). Cached per (p, N_T); the cache is
/// write-once per key and safe for concurrent readers.
const QSeries& artin_hasse_universal(unsigned long p, long N_T);

/// E(c T^k) as a truncated series over the coefficient ring: the universal
/// series substituted, so no p-divisions happen here.
ESeries substituted_E(const ExtElement& c, long k, long hi);

/// E(lambda, T^{sign*n}) = prod_j E(lambda_j T^{sign*n*p^j}) for a finite
/// vector (entries beyond the stored length are zero).
ESeries E_of_witt(const WittVector<ExtElement>& lambda, long n, int sign, long hi);

/// exp(sum_j psi_j T^{sign*n*p^j} / p^j): recovers the integral entry vector
/// of the zero-extended ghost <psi_0..psi_L, 0, ...> and takes the product of
/// substituted universal exponentials. All p-division is confined to the
/// ghost recovery.
ESeries exp_from_ghost(const std::vector<ExtElement>& psi, long n, int sign, long hi);

/// e_d(lambda, T^sign) = E([pi_m] lambda, T^{sign*n}), d = n p^m; lives in
/// 1 + pi_m T B[[T]].
ESeries pi_exponential(const WittVector<ExtElement>& lambda, long d, int sign, long hi);

/// E_m(T) = e_{p^m}((1,0,...,0), T).
ESeries robba_E(const RingPtr& ring, long m, int sign, long hi);

/// e_{p^s}(f^-, 1) = prod_d e_d(lambda_d, T^{-1}) over the co-monomial
/// blocks of f^-; requires strictly negative support.
ESeries e_minus(const WittVector<ESeries>& f_minus, long hi);
ESeries e_minus_blocks(const std::map<long, ComonomialBlock>& blocks, long hi);

using CoeffFrobenius = std::function<ExtElement(const ExtElement&)>;
CoeffFrobenius identity_frobenius();

/// theta_d(lambda, T) = e_d(frob(lambda), T^p) / e_d(lambda, T); frob must
/// fix the pi_j (the identity qualifies over these rings).
ESeries theta(const WittVector<ExtElement>& lambda, long d, const CoeffFrobenius& frob,
              long hi);

struct EvalAt1 {
    ExtElement value;
    mpq_class error_valuation; // truncation error is O(p^this)
};

/// Sum of coefficients with a hull-extrapolated truncation bound; refuses
/// series that are not Overconvergent.
EvalAt1 eval_at_1(const ESeries& f, const GrowthReport& rep, long target_digits);

} // namespace padic

#endif
