#ifndef PADIC_RATIONAL_HPP
#define PADIC_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "padic/errors.hpp"

namespace padic {

// p-adic valuation of an integer; nullopt for 0.
std::optional<long> vp(const mpz_class& n, unsigned long p);

// p-adic valuation of a rational; nullopt for 0.
std::optional<long> vp(const mpq_class& q, unsigned long p);

// v_p(k!) = (k - s_p(k)) / (p - 1), exact.
long vp_factorial(unsigned long k, unsigned long p);

mpz_class pow_ui(const mpz_class& base, unsigned long e);
mpz_class pow_p(unsigned long p, unsigned long e);
mpq_class pow_q(const mpq_class& base, unsigned long e);

// Canonical residue in [0, m).
mpz_class mod_reduce(const mpz_class& a, const mpz_class& m);

// Inverse of a mod m; requires gcd(a, m) = 1.
mpz_class mod_inverse(const mpz_class& a, const mpz_class& m);

// Residue of a rational with p-coprime denominator mod p^k.
mpz_class rational_mod_pk(const mpq_class& q, unsigned long p, const mpz_class& pk);

bool is_prime(unsigned long p);

// Parses "num" or "num/den" (base 10). Throws ParseError on malformed input.
mpq_class parse_rational(const std::string& s);
std::string rational_str(const mpq_class& q);

// Exact rational comparisons against a fraction a/b.
inline mpq_class frac(long a, long b) { mpq_class q(a, b); q.canonicalize(); return q; }

} // namespace padic

#endif
