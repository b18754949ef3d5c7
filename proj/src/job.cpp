#include "padic/job.hpp"

#include <algorithm>

#include "padic/polynomial.hpp"

namespace padic {

using nlohmann::json;

namespace {

mpq_class q_from(const json& j, const char* what) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError(std::string(what) + ": expected a number string");
}

long int_from(const json& j, const char* what) {
    if (j.is_number_integer()) return j.get<long>();
    if (j.is_string()) {
        mpq_class q = parse_rational(j.get<std::string>());
        if (q.get_den() != 1) throw ParseError(std::string(what) + ": expected an integer");
        return static_cast<long>(q.get_num().get_si());
    }
    throw ParseError(std::string(what) + ": expected an integer");
}

// Balanced representative in (-p^N/2, p^N/2]; matches how the reports print
// small negative values like -1 or -2.
std::string balanced_str(const mpz_class& c, const mpz_class& modulus) {
    mpz_class r = mod_reduce(c, modulus);
    if (2 * r > modulus) r -= modulus;
    return r.get_str();
}

} // namespace

PrecisionBudget JobSpec::budget() const {
    PrecisionBudget b;
    b.p = p;
    b.n_digits = precision;
    b.guard_digits = guard;
    return b;
}

RingPtr JobSpec::ring() const {
    if (lt) return make_tower(*lt, level, budget());
    return Ring::zp(budget());
}

JobSpec parse_job(const json& raw) {
    if (!raw.is_object()) throw ParseError("job must be a JSON object");
    JobSpec job;
    if (!raw.contains("p")) throw ValidationError("missing field: p");
    long pv = int_from(raw.at("p"), "p");
    if (pv < 2 || !is_prime(static_cast<unsigned long>(pv)))
        throw ValidationError("p must be a prime");
    job.p = static_cast<unsigned long>(pv);
    job.precision = raw.contains("precision") ? int_from(raw.at("precision"), "precision") : 20;
    if (job.precision < 1) throw ValidationError("precision must be >= 1");
    job.truncation = raw.contains("truncation") ? int_from(raw.at("truncation"), "truncation") : 64;
    if (job.truncation < 1) throw ValidationError("truncation must be >= 1");
    job.level = raw.contains("level") ? int_from(raw.at("level"), "level") : 0;
    if (job.level < 0) throw ValidationError("level must be >= 0");
    job.guard = raw.contains("guard") ? int_from(raw.at("guard"), "guard")
                                      : default_guard(job.p, job.truncation, job.level);
    if (raw.contains("override_M")) job.override_M = int_from(raw.at("override_M"), "override_M");
    if (raw.contains("tail_window")) {
        job.tail_window = q_from(raw.at("tail_window"), "tail_window");
        if (job.tail_window <= 0 || job.tail_window > 1)
            throw ValidationError("tail_window must lie in (0, 1]");
    }
    if (raw.contains("lubin_tate")) {
        const json& lt = raw.at("lubin_tate");
        if (!lt.is_object() || !lt.contains("w") || !lt.contains("P"))
            throw ValidationError("lubin_tate needs fields w and P");
        std::vector<mpq_class> P;
        for (const auto& c : lt.at("P")) P.push_back(q_from(c, "lubin_tate.P"));
        bool trunc = lt.contains("truncated") && lt.at("truncated").get<bool>();
        job.lt = lt_validate(job.p, std::move(P), q_from(lt.at("w"), "lubin_tate.w"), trunc);
    }
    job.payload = raw;
    return job;
}

nlohmann::json elem_to_json(const ExtElement& a, long digits) {
    if (a.denom() != 0) throw ValidationError("cannot serialize a non-integral element");
    long d = std::min(digits, a.abs_prec());
    mpz_class m = a.ring()->pow_p(d);
    json out = json::array();
    for (const auto& c : a.num()) out.push_back(balanced_str(c, m));
    return out;
}

ExtElement elem_from_json(const RingPtr& ring, const json& j, bool allow_denominator) {
    std::vector<mpq_class> coeffs;
    if (j.is_string() || j.is_number_integer()) {
        coeffs.push_back(q_from(j, "element"));
    } else if (j.is_array()) {
        for (const auto& c : j) coeffs.push_back(q_from(c, "element"));
    } else {
        throw ParseError("element: expected a string or an array of strings");
    }
    long k = 0;
    if (allow_denominator) {
        for (const auto& c : coeffs) {
            auto v = vp(c.get_den(), ring->p());
            k = std::max(k, v.value_or(0));
        }
        if (k > 0) {
            mpq_class scale(padic::pow_p(ring->p(), static_cast<unsigned long>(k)));
            for (auto& c : coeffs) {
                c *= scale;
                c.canonicalize();
            }
        }
    }
    return ExtElement::from_poly(ring, coeffs).scale_pow_p(-k);
}

nlohmann::json series_to_json(const ESeries& s, long digits) {
    json coeffs = json::object();
    for (const auto& [d, c] : s.coeffs()) coeffs[std::to_string(d)] = elem_to_json(c, digits);
    json out;
    out["window"] = json::array({s.lo() <= -kWindowInf ? json(nullptr) : json(s.lo()),
                                 s.hi() >= kWindowInf ? json(nullptr) : json(s.hi())});
    out["coeffs"] = coeffs;
    return out;
}

ESeries series_from_json(const RingPtr& ring, const json& j) {
    if (!j.is_object() || !j.contains("coeffs"))
        throw ParseError("series: expected {window, coeffs}");
    long lo = -kWindowInf, hi = kWindowInf;
    if (j.contains("window") && j.at("window").is_array() && j.at("window").size() == 2) {
        if (!j.at("window")[0].is_null()) lo = int_from(j.at("window")[0], "window");
        if (!j.at("window")[1].is_null()) hi = int_from(j.at("window")[1], "window");
    }
    ESeries s(ExtElement::zero(ring), lo, hi);
    for (const auto& [k, v] : j.at("coeffs").items()) {
        long d = int_from(json(k), "series degree");
        s.set(d, elem_from_json(ring, v));
    }
    return s;
}

nlohmann::json witt_to_json(const WittVector<ExtElement>& w, long digits) {
    json out = json::array();
    for (long i = 0; i < w.len(); ++i) out.push_back(elem_to_json(w[i], digits));
    return out;
}

WittVector<ExtElement> witt_from_json(const RingPtr& ring, const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("witt vector: expected a nonempty array");
    std::vector<ExtElement> e;
    for (const auto& c : j) e.push_back(elem_from_json(ring, c));
    return WittVector<ExtElement>(ExtElement::zero(ring), std::move(e));
}

RankOneOperator operator_from_json(const RingPtr& ring, const json& job) {
    RankOneOperator op;
    op.ring = ring;
    op.a0 = job.contains("a0") ? q_from(job.at("a0"), "a0") : mpq_class(0);
    if (job.contains("coefficients")) {
        for (const auto& [k, v] : job.at("coefficients").items()) {
            long i = int_from(json(k), "coefficient degree");
            if (i == 0) throw ValidationError("degree 0 belongs in a0");
            ExtElement c = elem_from_json(ring, v);
            if (c.is_zero()) continue;
            // displayed form is d - a0 + sum c_i T^i, matrix g gets -c_i
            op.coeffs.emplace(i, -c);
        }
    }
    return op;
}

namespace {

json valuation_json(const Valuation& v) {
    if (v.infinite) return json{{"zero_at_precision", rational_str(v.bound)}};
    return json(rational_str(v.v));
}

json not_integral_json(const NotIntegral& w) {
    return json{{"index", w.index}, {"valuation", valuation_json(w.v)}};
}

json block_json(const BlockReport& blk, long digits) {
    json b;
    b["n"] = blk.n;
    b["M"] = blk.M;
    json ghost = json::array();
    for (const auto& g : blk.ghost_phi) {
        if (g.denom() != 0)
            ghost.push_back(json{{"valuation", valuation_json(g.val())}});
        else
            ghost.push_back(elem_to_json(g, digits));
    }
    b["ghost"] = ghost;
    if (blk.lambda)
        b["lambda"] = witt_to_json(*blk.lambda, digits);
    else
        b["not_integral"] = not_integral_json(*blk.witness);
    b["irregularity"] = blk.irregularity;
    return b;
}

json moderate_json(const ModerateReport& m) {
    json out;
    out["in_z"] = m.in_z;
    out["in_zp"] = m.in_zp;
    out["in_z_p_localized"] = m.in_zp; // for rationals Z_p membership = Z_(p)
    if (m.frobenius_order)
        out["frobenius_order"] = static_cast<long>(*m.frobenius_order);
    else
        out["frobenius_order"] = nullptr;
    if (m.order_bound)
        out["frobenius_order_bound"] = m.order_bound->get_str();
    else
        out["frobenius_order_bound"] = nullptr;
    return out;
}

json solvability_json(const SolvabilityReport& rep, long digits) {
    json out;
    out["solvable"] = rep.solvable;
    if (rep.solvable) out["irregularity"] = rep.irregularity;
    json a0 = moderate_json(rep.a0_status);
    a0["value"] = rational_str(rep.a0);
    out["a0"] = a0;
    json neg;
    neg["solvable"] = rep.negative.solvable;
    neg["stripped"] = rep.negative.stripped;
    if (rep.negative.nonintegral_coefficient)
        neg["nonintegral_coefficient"] = *rep.negative.nonintegral_coefficient;
    json nblocks = json::array();
    for (const auto& [n, blk] : rep.negative.blocks) nblocks.push_back(block_json(blk, digits));
    neg["blocks"] = nblocks;
    neg["level"] = rep.negative.ring ? rep.negative.ring->level() : 0;
    out["negative"] = neg;
    json pos;
    pos["solvable"] = rep.positive.solvable;
    if (rep.positive.nonintegral_coefficient)
        pos["nonintegral_coefficient"] = *rep.positive.nonintegral_coefficient;
    json pblocks = json::array();
    for (const auto& [n, blk] : rep.positive.families) pblocks.push_back(block_json(blk, digits));
    pos["families"] = pblocks;
    out["positive"] = pos;
    return out;
}

long achieved_digits(const RankOneOperator& op, long digits) {
    long d = digits;
    for (const auto& [i, c] : op.coeffs) d = std::min(d, c.abs_prec());
    return d;
}

long series_achieved(const ESeries& s, long digits) {
    long d = digits;
    for (const auto& [deg, c] : s.coeffs()) d = std::min(d, c.abs_prec());
    return d;
}

json ring_json(const RingPtr& r) {
    json out;
    out["p"] = static_cast<long>(r->p());
    out["level"] = r->level();
    if (r->has_tower()) {
        json P = json::array();
        for (const auto& c : r->lt().P) P.push_back(rational_str(c));
        out["P"] = P;
    }
    return out;
}

json run_command(const std::string& command, const JobSpec& job) {
    json out;
    out["command"] = command;
    out["p"] = static_cast<long>(job.p);
    out["precision"] = job.precision;
    out["truncation"] = job.truncation;

    const long digits = job.precision;

    if (command == "ah-exp") {
        const QSeries& E = artin_hasse_universal(job.p, job.truncation);
        json coeffs = json::object();
        for (const auto& [d, c] : E.coeffs()) coeffs[std::to_string(d)] = rational_str(c);
        out["series"] = json{{"window", json::array({0, job.truncation})}, {"coeffs", coeffs}};
        return out;
    }

    if (command == "lt-validate") {
        // parse_job already validated when present; re-validate to produce a
        // verdict rather than an error
        if (!job.payload.contains("lubin_tate"))
            throw ValidationError("lt-validate needs a lubin_tate field");
        out["valid"] = true;
        out["w"] = rational_str(job.lt->w);
        out["degree"] = job.lt->degree();
        return out;
    }

    if (command == "lt-iso") {
        if (!job.lt) throw ValidationError("lt-iso needs lubin_tate");
        if (!job.payload.contains("P2")) throw ValidationError("lt-iso needs P2");
        std::vector<mpq_class> P2;
        for (const auto& c : job.payload.at("P2").at("P")) P2.push_back(q_from(c, "P2.P"));
        LubinTateData lt2 = lt_validate(job.p, std::move(P2),
                                        q_from(job.payload.at("P2").at("w"), "P2.w"));
        out["isomorphic"] = iso_test(*job.lt, lt2);
        return out;
    }

    if (command == "lt-group-law") {
        if (!job.lt) throw ValidationError("lt-group-law needs lubin_tate");
        long N = job.payload.contains("N") ? int_from(job.payload.at("N"), "N") : 12;
        FormalGroupLaw G = group_law(*job.lt, N);
        json terms = json::object();
        for (const auto& [k, v] : G.terms())
            terms[std::to_string(k.first) + "," + std::to_string(k.second)] = rational_str(v);
        out["N"] = N;
        out["terms"] = terms;
        return out;
    }

    if (command == "lt-bracket") {
        if (!job.lt) throw ValidationError("lt-bracket needs lubin_tate");
        long N = job.payload.contains("N") ? int_from(job.payload.at("N"), "N") : 12;
        mpq_class a = job.payload.contains("a") ? q_from(job.payload.at("a"), "a") : mpq_class(1);
        LubinTateData lt2 = *job.lt;
        if (job.payload.contains("P2")) {
            std::vector<mpq_class> P2;
            for (const auto& c : job.payload.at("P2").at("P")) P2.push_back(q_from(c, "P2.P"));
            lt2 = lt_validate(job.p, std::move(P2), q_from(job.payload.at("P2").at("w"), "P2.w"));
        }
        std::vector<mpq_class> U = bracket(a, *job.lt, lt2, N);
        json arr = json::array();
        for (const auto& c : U) arr.push_back(rational_str(c));
        out["series"] = arr;
        return out;
    }

    if (command == "lt-torsion") {
        if (!job.lt) throw ValidationError("lt-torsion needs lubin_tate");
        if (!job.payload.contains("P2")) throw ValidationError("lt-torsion needs P2");
        std::vector<mpq_class> P2;
        for (const auto& c : job.payload.at("P2").at("P")) P2.push_back(q_from(c, "P2.P"));
        LubinTateData lt2 = lt_validate(job.p, std::move(P2),
                                        q_from(job.payload.at("P2").at("w"), "P2.w"));
        RingPtr ring = job.ring();
        ExtElement x = job.payload.contains("x") ? elem_from_json(ring, job.payload.at("x"))
                                                 : pi_at(ring, ring->level());
        ExtElement y = torsion_equiv(x, *job.lt, lt2);
        out["value"] = elem_to_json(y, digits);
        out["shift_valuation"] = valuation_json((y - x).val());
        return out;
    }

    RingPtr ring = job.ring();
    out["ring"] = ring_json(ring);

    if (command == "witt-ghost" || command == "witt-frob" || command == "witt-versch") {
        WittVector<ExtElement> a = witt_from_json(ring, job.payload.at("a"));
        if (command == "witt-ghost") {
            GhostVector<ExtElement> g = ghost(a);
            json arr = json::array();
            for (const auto& c : g.entries) arr.push_back(elem_to_json(c, digits));
            out["ghost"] = true;
            out["entries"] = arr;
        } else if (command == "witt-frob") {
            out["result"] = witt_to_json(frobenius(a), digits);
        } else {
            out["result"] = witt_to_json(verschiebung(a), digits);
        }
        return out;
    }
    if (command == "witt-add" || command == "witt-mul") {
        WittVector<ExtElement> a = witt_from_json(ring, job.payload.at("a"));
        WittVector<ExtElement> b = witt_from_json(ring, job.payload.at("b"));
        out["result"] = witt_to_json(command == "witt-add" ? witt_add(a, b) : witt_mul(a, b),
                                     digits);
        return out;
    }
    if (command == "witt-unghost") {
        if (!job.payload.contains("ghost")) throw ValidationError("witt-unghost needs ghost");
        std::vector<ExtElement> e;
        for (const auto& c : job.payload.at("ghost"))
            e.push_back(elem_from_json(ring, c, /*allow_denominator=*/true));
        GhostVector<ExtElement> g{ExtElement::zero(ring), std::move(e)};
        auto r = try_unghost(g);
        if (r.ok()) {
            out["integral"] = true;
            out["result"] = witt_to_json(*r.vec, digits);
        } else {
            out["integral"] = false;
            out["not_integral"] = not_integral_json(*r.fail);
        }
        return out;
    }

    if (command == "pi-exp") {
        WittVector<ExtElement> lam = witt_from_json(ring, job.payload.at("lambda"));
        long d = int_from(job.payload.at("d"), "d");
        int sign = job.payload.contains("sign") ? static_cast<int>(int_from(job.payload.at("sign"), "sign")) : 1;
        if (sign != 1 && sign != -1) throw ValidationError("sign must be 1 or -1");
        ESeries s = pi_exponential(lam, d, sign, job.truncation);
        out["precision_achieved"] = series_achieved(s, digits);
        out["series"] = series_to_json(s, digits);
        GrowthReport rep = growth_slope(s, job.tail_window);
        out["growth"] = json{{"classification", growth_name(rep.classification)},
                             {"slope", rational_str(rep.slope)},
                             {"min_tail_valuation", rational_str(rep.min_tail_val)}};
        return out;
    }

    if (command == "theta-eval") {
        WittVector<ExtElement> lam = witt_from_json(ring, job.payload.at("lambda"));
        long d = job.payload.contains("d") ? int_from(job.payload.at("d"), "d") : 1;
        long m = *vp(mpz_class(d), job.p);
        ESeries th = theta(lam, d, identity_frobenius(), job.truncation);
        out["precision_achieved"] = series_achieved(th, digits);
        GrowthReport rep = growth_slope(th, job.tail_window);
        EvalAt1 ev = eval_at_1(th, rep, job.precision);
        long root_order = 1;
        for (long t = 0; t <= m; ++t) root_order *= static_cast<long>(job.p);
        ExtElement pw = ev.value.pow(static_cast<unsigned long>(root_order));
        // compare against 1 at the precision the truncation bound supports
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), ev.error_valuation.get_num().get_mpz_t(),
                   ev.error_valuation.get_den().get_mpz_t());
        long cmp_digits = std::min<long>(job.precision, fl.get_si());
        Valuation rv = (pw - ExtElement::one(ring)).val();
        bool is_root = rv.infinite || rv.v >= cmp_digits;
        out["value"] = elem_to_json(ev.value, digits);
        out["root_order"] = root_order;
        out["is_root_of_unity"] = is_root;
        out["truncation_error_valuation"] = rational_str(ev.error_valuation);
        out["growth"] = json{{"classification", growth_name(rep.classification)},
                             {"slope", rational_str(rep.slope)},
                             {"min_tail_valuation", rational_str(rep.min_tail_val)}};
        return out;
    }

    if (command == "decompose") {
        if (!job.payload.contains("witt_series"))
            throw ValidationError("decompose needs witt_series");
        std::vector<ESeries> entries;
        for (const auto& sj : job.payload.at("witt_series"))
            entries.push_back(series_from_json(ring, sj));
        if (entries.empty()) throw ValidationError("witt_series must be nonempty");
        WittVector<ESeries> f(ESeries(ExtElement::zero(ring)), std::move(entries));
        Decomposition dec = decompose(f);
        json blocks = json::array();
        for (const auto& [d, blk] : dec.blocks)
            blocks.push_back(json{{"d", d},
                                  {"n", blk.n},
                                  {"m", blk.m},
                                  {"lambda", witt_to_json(blk.lambda, digits)}});
        out["blocks"] = blocks;
        if (dec.cst) out["constant"] = witt_to_json(*dec.cst, digits);
        if (dec.positive) {
            json pos = json::array();
            for (long i = 0; i < dec.positive->len(); ++i)
                pos.push_back(series_to_json((*dec.positive)[i], digits));
            out["positive"] = pos;
        }
        return out;
    }

    // operator commands
    RankOneOperator op = operator_from_json(ring, job.payload);
    out["precision_achieved"] = achieved_digits(op, digits);

    if (command == "radius") {
        mpq_class r = job.payload.contains("r") ? q_from(job.payload.at("r"), "r") : mpq_class(0);
        long S = job.payload.contains("S") ? int_from(job.payload.at("S"), "S") : 16;
        RayEstimate est = ray_estimate(op, r, S);
        out["radius_valuation"] = rational_str(est.radius_val);
        out["small_radius"] = est.small_radius;
        out["r"] = rational_str(r);
        out["S"] = S;
        return out;
    }
    if (command == "solvable") {
        SolvabilityReport rep = solve(op, job.override_M);
        json s = solvability_json(rep, digits);
        for (auto it = s.begin(); it != s.end(); ++it) out[it.key()] = it.value();
        out["ring"] = ring_json(rep.negative.ring ? rep.negative.ring : ring);
        return out;
    }
    if (command == "irregularity") {
        SolvabilityReport rep = solve(op, job.override_M);
        out["irregularity"] = irregularity(rep);
        return out;
    }
    if (command == "classify") {
        ClassificationKey key = classify(op, job.override_M);
        out["a0_mod_z"] = rational_str(key.a0_mod_z);
        json blocks = json::object();
        for (const auto& [n, res] : key.residues) {
            json arr = json::array();
            for (unsigned long r : res) arr.push_back(static_cast<long>(r));
            blocks[std::to_string(n)] = arr;
        }
        out["blocks"] = blocks;
        out["note"] = "equal keys are isomorphic; distinct keys are distinct under the "
                      "implemented normalizations";
        return out;
    }

    throw ValidationError("unknown command: " + command);
}

} // namespace

RunResult run(const std::string& command, const json& raw) {
    try {
        if (command == "lt-validate") {
            // an invalid series is a verdict here, not a failure
            try {
                JobSpec job = parse_job(raw);
                return {run_command(command, job), 0};
            } catch (const NotLubinTate& e) {
                json out;
                out["command"] = command;
                out["valid"] = false;
                out["reason"] = e.what();
                return {out, 0};
            }
        }
        JobSpec job = parse_job(raw);
        return {run_command(command, job), 0};
    } catch (const ParseError& e) {
        return {json{{"error", {{"code", "ParseError"}, {"message", e.what()}}}}, 2};
    } catch (const ValidationError& e) {
        return {json{{"error", {{"code", "ValidationError"}, {"message", e.what()}}}}, 2};
    } catch (const NotLubinTate& e) {
        return {json{{"error", {{"code", "NotLubinTate"}, {"message", e.what()}}}}, 2};
    } catch (const InternalError& e) {
        return {json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}, 4};
    } catch (const Error& e) {
        return {json{{"error", {{"code", e.code()}, {"message", e.what()}}}}, 3};
    }
}

} // namespace padic
