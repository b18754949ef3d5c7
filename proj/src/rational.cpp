#include "padic/rational.hpp"

#include <cctype>

namespace padic {

std::optional<long> vp(const mpz_class& n, unsigned long p) {
    if (n == 0) return std::nullopt;
    mpz_class rem;
    mpz_class pz(static_cast<unsigned long>(p));
    mp_bitcnt_t e = mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
    return static_cast<long>(e);
}

std::optional<long> vp(const mpq_class& q, unsigned long p) {
    if (q == 0) return std::nullopt;
    return *vp(q.get_num(), p) - *vp(q.get_den(), p);
}

long vp_factorial(unsigned long k, unsigned long p) {
    unsigned long s = 0, n = k;
    while (n > 0) {
        s += n % p;
        n /= p;
    }
    return static_cast<long>((k - s) / (p - 1));
}

mpz_class pow_ui(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

mpz_class pow_p(unsigned long p, unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

mpq_class pow_q(const mpq_class& base, unsigned long e) {
    mpq_class r(1);
    mpq_class b = base;
    while (e > 0) {
        if (e & 1UL) r *= b;
        e >>= 1UL;
        if (e) b *= b;
    }
    return r;
}

mpz_class mod_reduce(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InternalError("mod_inverse: not invertible");
    return r;
}

mpz_class rational_mod_pk(const mpq_class& q, unsigned long p, const mpz_class& pk) {
    if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), p))
        throw ValidationError("denominator divisible by p");
    mpz_class num = mod_reduce(q.get_num(), pk);
    mpz_class den_inv = mod_inverse(mod_reduce(q.get_den(), pk), pk);
    return mod_reduce(num * den_inv, pk);
}

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    mpz_class z(p);
    return mpz_probab_prime_p(z.get_mpz_t(), 32) != 0;
}

mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty number literal");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw ParseError("malformed number literal: " + s);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("malformed number literal: " + s);
    if (q.get_den() == 0) throw ParseError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string rational_str(const mpq_class& q) {
    return q.get_str();
}

} // namespace padic
