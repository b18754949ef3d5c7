#ifndef PADIC_JOB_HPP
#define PADIC_JOB_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "padic/solvability.hpp"

namespace padic {

/// Fully validated job: ring data plus the command-specific payload.
/// Defaults: precision 20, truncation 64, guard ceil(N_T/(p-1)) + level + 2.
struct JobSpec {
    unsigned long p = 2;
    long precision = 20;
    long truncation = 64;
    long guard = 0;
    long level = 0;
    std::optional<LubinTateData> lt;
    std::optional<long> override_M;
    mpq_class tail_window = frac(1, 2);
    nlohmann::json payload;

    PrecisionBudget budget() const;
    RingPtr ring() const;
};

JobSpec parse_job(const nlohmann::json& raw);

struct RunResult {
    nlohmann::json report;
    int exit_code = 0;
};

/// Dispatches one command; verdicts are data (exit 0), failures carry
/// machine-readable codes and a nonzero exit.
RunResult run(const std::string& command, const nlohmann::json& raw);

// serialization helpers shared with the test suite
nlohmann::json elem_to_json(const ExtElement& a, long digits);
/// Element encodings are p-integral ("num/den", den coprime to p) except for
/// ghost-vector entries, which may carry p-power denominators.
ExtElement elem_from_json(const RingPtr& ring, const nlohmann::json& j,
                          bool allow_denominator = false);
nlohmann::json series_to_json(const ESeries& s, long digits);
ESeries series_from_json(const RingPtr& ring, const nlohmann::json& j);
nlohmann::json witt_to_json(const WittVector<ExtElement>& w, long digits);
WittVector<ExtElement> witt_from_json(const RingPtr& ring, const nlohmann::json& j);

/// Operator JSON uses the displayed form d - a0 + sum coefficients[i] T^i,
/// so the stored matrix coefficients of g are the negated entries.
RankOneOperator operator_from_json(const RingPtr& ring, const nlohmann::json& job);

} // namespace padic

#endif
