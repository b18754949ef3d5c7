#ifndef PADIC_LUBIN_TATE_HPP
#define PADIC_LUBIN_TATE_HPP

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

#include "padic/rational.hpp"

namespace padic {

class ExtElement;

/// A validated Lubin-Tate series P over Z_p for the uniformizer w = p*unit:
/// P = wX mod X^2 and P = X^p mod w. Coefficients are rationals with
/// p-coprime denominators; `truncated_series` marks data that is only a
/// truncation of an honest power series (torsion towers reject those).
struct LubinTateData {
    unsigned long p = 0;
    mpq_class w;
    std::vector<mpq_class> P; // c_0 .. c_deg
    bool truncated_series = false;

    long degree() const { return static_cast<long>(P.size()) - 1; }
};

LubinTateData lt_validate(unsigned long p, std::vector<mpq_class> P, mpq_class w,
                          bool truncated_series = false);

/// Bivariate series over Q truncated by total degree; used for G_P(X,Y).
class FormalGroupLaw {
public:
    FormalGroupLaw(long total_degree) : degree_(total_degree) {}

    long total_degree() const { return degree_; }
    const std::map<std::pair<long, long>, mpq_class>& terms() const { return terms_; }
    mpq_class coeff(long i, long j) const;
    void set(long i, long j, const mpq_class& c);

private:
    long degree_;
    std::map<std::pair<long, long>, mpq_class> terms_;
};

/// The unique G_P with G = X+Y mod degree 2 and P(G(X,Y)) = G(P(X),P(Y)),
/// solved degree by degree. Throws LinearStepSingular if a homogeneous step
/// fails to divide (that would contradict uniqueness).
FormalGroupLaw group_law(const LubinTateData& P, long total_degree);

/// [a]_{P,Pt}: unique series with [a] = aX mod X^2 and [a](P(X)) = Pt([a](X)).
std::vector<mpq_class> bracket(const mpq_class& a, const LubinTateData& P,
                               const LubinTateData& Pt, long degree);

/// Image of a torsion point under [1]_{P,Pt}; asserts v(y - x) >= 2 v(x).
ExtElement torsion_equiv(const ExtElement& x, const LubinTateData& P,
                         const LubinTateData& Pt);

/// Lubin-Tate groups are isomorphic over Z_p iff they share the uniformizer.
bool iso_test(const LubinTateData& P, const LubinTateData& Pt);

// Residual of the endomorphism identity P(G(X,Y)) - G(P(X),P(Y)); zero when
// the law is correct to its stored degree.
FormalGroupLaw group_law_residual(const LubinTateData& P, const FormalGroupLaw& G);

} // namespace padic

#endif
