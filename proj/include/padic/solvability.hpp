#ifndef PADIC_SOLVABILITY_HPP
#define PADIC_SOLVABILITY_HPP

#include <map>
#include <optional>
#include <vector>

#include "padic/exponentials.hpp"
#include "padic/witt.hpp"

namespace padic {

/// Rank one operator d - g(T) with d = T d/dT, g = a0 + sum_{i != 0} a_i T^i.
/// a0 is kept exact; the other coefficients live in the ring.
struct RankOneOperator {
    RingPtr ring;
    mpq_class a0;
    std::map<long, ExtElement> coeffs; // i -> a_i, i != 0

    ESeries g_series() const;          // full g including a0
    ESeries g_series_no_a0() const;
};

RankOneOperator tensor(const RankOneOperator& a, const RankOneOperator& b);

/// g_{[s]} for s = 1..S: g_{[1]} = g/T, g_{[s+1]} = d/dT g_{[s]} + g_{[s]} g_{[1]}.
std::vector<ESeries> iterate_matrices(const RankOneOperator& op, long S);

/// Radius of convergence in valuation form (V = -log_p Ray). `r` is the
/// valuation height of the test radius (rho = p^-r; r = 0 is the unit
/// circle). Exact in the small-radius regime |g|_rho > 1, a tail-window
/// estimate otherwise.
struct RayEstimate {
    mpq_class radius_val;
    bool small_radius = false;
};
RayEstimate ray_estimate(const RankOneOperator& op, const mpq_class& r, long S);

/// Moderate operator d - a0: solvable iff a0 in Z_p, trivial iff a0 in Z;
/// the Frobenius order is the order of p modulo the reduced denominator,
/// cross-checked against the tetration tower bound when that is computable.
struct ModerateReport {
    bool in_zp = false;      // solvable
    bool in_z = false;       // trivial
    std::optional<unsigned long> frobenius_order;
    std::optional<mpz_class> order_bound; // tower bound prod([q_i]_{r_i} - 1)
};
ModerateReport moderate(const mpq_class& a0, unsigned long p);

/// One prime-to-p family on either side of the criterion.
struct BlockReport {
    long n = 0;
    long M = 0; // top twist index
    std::vector<ExtElement> ghost_phi;
    std::optional<WittVector<ExtElement>> lambda;
    std::optional<NotIntegral> witness;
    long irregularity = 0; // n p^l(lambda), 0 on residue-zero blocks
    bool integral() const { return lambda.has_value(); }
};

struct PositiveReport {
    bool solvable = false;
    std::optional<long> nonintegral_coefficient; // degree with v(a_i) < 0
    std::map<long, BlockReport> families;        // by n
};

struct NegativeReport {
    bool solvable = false;
    std::optional<long> nonintegral_coefficient;
    std::vector<long> stripped;                  // degrees removed by the tail test
    std::map<long, BlockReport> blocks;          // by n
    RingPtr ring;                                // possibly raised level
};

/// Positive-side criterion: phi_{n,m} = a_{np^m}/n, unghosted; integrality
/// is checked past the support until the valuation pattern stabilizes.
PositiveReport solve_positive(const RankOneOperator& op);

/// Small-tail stripping at the sub-unit radius rho = p^-r (r > 0), or the
/// rho -> 1 limit criterion when r = 0: degree i is removed when
/// v(a_i) - v_p(i) - |i| r exceeds 1/(p-1) strictly.
struct StripResult {
    RankOneOperator op;
    std::vector<long> stripped;
    ESeries witness_log; // log of the exponential that was divided out
};
StripResult strip_small_tail(const RankOneOperator& op, const mpq_class& r);

/// Negative-side criterion via the pure-pattern phantom inversion
/// phi_j = -a_{-np^j} / (n pi_{M-j}); raises the ring level to max M when a
/// Lubin-Tate series is attached.
NegativeReport solve_negative(const RankOneOperator& op,
                              std::optional<long> override_M = std::nullopt);

struct SolvabilityReport {
    bool solvable = false;
    ModerateReport a0_status;
    mpq_class a0;
    PositiveReport positive;
    NegativeReport negative;
    long irregularity = 0; // defined when solvable
};

SolvabilityReport solve(const RankOneOperator& op,
                        std::optional<long> override_M = std::nullopt);

/// max over blocks of n p^l(lambda) and 0; requires a solvable report.
long irregularity(const SolvabilityReport& rep);

/// L(a0, f^-) = d - a0 + sum_n n sum_j pi_{m-j} phi_{n,j} T^{-np^j}, i.e.
/// d - dlog(T^{a0} e_minus(f^-, 1)).
RankOneOperator build_L(const mpq_class& a0, const std::map<long, ComonomialBlock>& blocks,
                        const RingPtr& ring);

/// Isomorphism-class key: a0 mod Z and, per n, the residue vector of the
/// block with leading zero residues stripped (V-padding and F-twists over
/// F_p collapse to exactly this normal form).
struct ClassificationKey {
    mpq_class a0_mod_z;
    std::map<long, std::vector<unsigned long>> residues;

    bool operator==(const ClassificationKey&) const = default;
};
ClassificationKey classify(const RankOneOperator& op,
                           std::optional<long> override_M = std::nullopt);

} // namespace padic

#endif
