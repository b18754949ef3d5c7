#include "padic/ring.hpp"

#include <cmath>

#include "padic/element.hpp"
#include "padic/errors.hpp"

namespace padic {

long default_guard(unsigned long p, long truncation, long level) {
    long n = truncation > 0 ? truncation : 1;
    long g = (n + static_cast<long>(p) - 2) / (static_cast<long>(p) - 1);
    return g + level + 2;
}

namespace {

std::vector<mpq_class> poly_mul_q(const std::vector<mpq_class>& a,
                                  const std::vector<mpq_class>& b) {
    std::vector<mpq_class> r(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// f(g) for polynomials over Q, Horner on g.
std::vector<mpq_class> poly_compose_q(const std::vector<mpq_class>& f,
                                      const std::vector<mpq_class>& g) {
    std::vector<mpq_class> r{f.back()};
    for (long i = static_cast<long>(f.size()) - 2; i >= 0; --i) {
        r = poly_mul_q(r, g);
        if (r.empty()) r.push_back(mpq_class(0));
        r[0] += f[static_cast<size_t>(i)];
    }
    return r;
}

} // namespace

RingPtr Ring::zp(const PrecisionBudget& budget) {
    if (!is_prime(budget.p)) throw ValidationError("p is not prime");
    if (budget.n_digits < 1) throw ValidationError("n_digits must be >= 1");
    auto r = std::shared_ptr<Ring>(new Ring());
    r->budget_ = budget;
    r->level_ = 0;
    r->e_ = 1;
    r->pW_ = padic::pow_p(budget.p, static_cast<unsigned long>(budget.working()));
    return r;
}

RingPtr Ring::tower(const LubinTateData& P, long level, const PrecisionBudget& budget) {
    if (!is_prime(budget.p)) throw ValidationError("p is not prime");
    if (P.p != budget.p) throw ValidationError("Lubin-Tate series prime mismatch");
    if (level < 0) throw ValidationError("level must be >= 0");
    if (P.truncated_series)
        throw NonPolynomialSeries("torsion towers require a polynomial Lubin-Tate series");

    auto r = std::shared_ptr<Ring>(new Ring());
    r->budget_ = budget;
    r->level_ = level;
    r->lt_ = P;

    const unsigned long p = budget.p;
    // u(Y) = P(Y)/Y, then Phi_s = u(P^(s)(X)): exact quotient P^(s+1)/P^(s).
    std::vector<mpq_class> u(P.P.begin() + 1, P.P.end());
    std::vector<mpq_class> ps{mpq_class(0), mpq_class(1)}; // P^(0) = X
    for (long k = 0; k < level; ++k) ps = poly_compose_q(P.P, ps);
    r->phi_exact_ = poly_compose_q(u, ps);

    // Eisenstein: v(c_0) = 1, interior v >= 1, monic.
    const auto& phi = r->phi_exact_;
    long e = static_cast<long>(phi.size()) - 1;
    if (phi[static_cast<size_t>(e)] != 1) throw NotEisenstein("modulus not monic");
    auto v0 = vp(phi[0], p);
    if (!v0 || *v0 != 1) throw NotEisenstein("constant term valuation != 1");
    for (long i = 1; i < e; ++i) {
        const auto& c = phi[static_cast<size_t>(i)];
        if (c == 0) continue;
        auto v = vp(c, p);
        if (!v || *v < 1) throw NotEisenstein("interior coefficient is a unit");
    }
    r->e_ = e;

    r->pW_ = padic::pow_p(p, static_cast<unsigned long>(budget.working()));
    r->phi_red_.reserve(phi.size());
    for (const auto& c : phi) r->phi_red_.push_back(rational_mod_pk(c, p, r->pW_));

    // pi_j = P^(level-j)(x): iterate P starting from x.
    {
        RingPtr self = r;
        std::vector<mpz_class> xv(static_cast<size_t>(e), mpz_class(0));
        if (e == 1) {
            // x = -phi_0 in Z_p.
            xv[0] = mod_reduce(-rational_mod_pk(phi[0], p, r->pW_), r->pW_);
        } else {
            xv[1] = 1;
        }
        ExtElement cur(self, xv, budget.working());
        std::vector<ExtElement> elems(static_cast<size_t>(level) + 1);
        elems[static_cast<size_t>(level)] = cur;
        for (long j = level - 1; j >= 0; --j) {
            cur = eval_poly(P.P, cur);
            elems[static_cast<size_t>(j)] = cur;
        }
        r->pi_.resize(static_cast<size_t>(level) + 1);
        for (long j = 0; j <= level; ++j)
            r->pi_[static_cast<size_t>(j)] = elems[static_cast<size_t>(j)].num();
    }
    return r;
}

const LubinTateData& Ring::lt() const {
    if (!lt_) throw LevelRaiseRequired("no Lubin-Tate series attached to this ring");
    return *lt_;
}

mpz_class Ring::pow_p(long k) const {
    if (k < 0) throw InternalError("pow_p: negative exponent");
    if (k == budget_.working()) return pW_;
    return padic::pow_p(budget_.p, static_cast<unsigned long>(k));
}

const std::vector<mpz_class>& Ring::pi_coeffs(long j) const {
    if (!lt_) throw LevelRaiseRequired("pi_j requires a tower ring");
    if (j < 0 || j > level_) throw ValidationError("pi index out of range");
    return pi_[static_cast<size_t>(j)];
}

bool Ring::compatible(const Ring& other) const {
    return budget_.p == other.budget_.p && level_ == other.level_ && e_ == other.e_ &&
           budget_.working() == other.budget_.working() &&
           lt_.has_value() == other.lt_.has_value() &&
           (!lt_ || lt_->P == other.lt_->P);
}

RingPtr make_tower(const LubinTateData& P, long level, const PrecisionBudget& budget) {
    return Ring::tower(P, level, budget);
}

} // namespace padic
