#ifndef PADIC_TEST_HELPERS_HPP
#define PADIC_TEST_HELPERS_HPP

#include <random>

#include "padic/element.hpp"
#include "padic/lubin_tate.hpp"
#include "padic/ring.hpp"

namespace padic::testing {

inline LubinTateData lt_standard(unsigned long p) {
    // P = pX + X^p
    std::vector<mpq_class> P(p + 1, mpq_class(0));
    P[1] = static_cast<long>(p);
    P[p] = 1;
    return lt_validate(p, P, mpq_class(static_cast<long>(p)));
}

inline LubinTateData lt_mult(unsigned long p) {
    // P = (X+1)^p - 1
    std::vector<mpq_class> P(p + 1, mpq_class(0));
    mpz_class b;
    for (unsigned long i = 1; i <= p; ++i) {
        mpz_bin_uiui(b.get_mpz_t(), p, i);
        P[i] = mpq_class(b);
    }
    return lt_validate(p, P, mpq_class(static_cast<long>(p)));
}

inline RingPtr tower(unsigned long p, long s, long prec = 20, long trunc = 64) {
    PrecisionBudget b{p, prec, default_guard(p, trunc, s)};
    return make_tower(lt_standard(p), s, b);
}

inline RingPtr tower_mult(unsigned long p, long s, long prec = 20, long trunc = 64) {
    PrecisionBudget b{p, prec, default_guard(p, trunc, s)};
    return make_tower(lt_mult(p), s, b);
}

// Deterministic random integral element.
inline ExtElement random_elem(const RingPtr& ring, std::mt19937_64& rng) {
    std::vector<mpz_class> c;
    std::uniform_int_distribution<unsigned long> digit(0, ring->p() - 1);
    for (long i = 0; i < ring->e(); ++i) {
        mpz_class v(0);
        for (long d = 0; d < 12; ++d) v = v * static_cast<long>(ring->p()) + digit(rng);
        c.push_back(v);
    }
    return ExtElement(ring, std::move(c), ring->working_digits());
}

inline ExtElement random_scalar(const RingPtr& ring, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned long> digit(0, ring->p() - 1);
    mpz_class v(0);
    for (long d = 0; d < 12; ++d) v = v * static_cast<long>(ring->p()) + digit(rng);
    return ExtElement(ring, {v}, ring->working_digits());
}

} // namespace padic::testing

#endif
