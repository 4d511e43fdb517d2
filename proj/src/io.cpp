#include "maxbandit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "maxbandit/errors.hpp"

namespace maxbandit::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t count_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw InputError(where + ": field '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) throw InputError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json opt(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_floating_point_v<T>)
        return num(*v);
    else
        return *v;
}

const char* segment_kind_name(CdfSegment::Kind k) {
    switch (k) {
        case CdfSegment::Kind::constant:
            return "constant";
        case CdfSegment::Kind::linear:
            return "linear";
        case CdfSegment::Kind::affine_cdf:
            return "affine-cdf";
        case CdfSegment::Kind::tail_reflect:
            return "tail-reflect";
    }
    return "?";
}

json segment_to_json(const CdfSegment& s) {
    json j{{"kind", segment_kind_name(s.kind)}, {"lo", s.lo}, {"hi", s.hi}};
    switch (s.kind) {
        case CdfSegment::Kind::constant:
            j["value"] = s.y0;
            break;
        case CdfSegment::Kind::linear:
            j["y0"] = s.y0;
            j["y1"] = s.y1;
            break;
        case CdfSegment::Kind::affine_cdf:
            j["scale"] = s.scale;
            j["offset"] = s.offset;
            j["bases"] = arms_to_json(s.bases);
            break;
        case CdfSegment::Kind::tail_reflect:
            j["anchor"] = s.anchor;
            j["scale"] = s.scale;
            j["tail_bound"] = tail_bound_to_json(*s.tail);
            break;
    }
    return j;
}

CdfSegment segment_from_json(const json& j, const std::string& where) {
    const std::string kind = text(j, "kind", where);
    const double lo = number(j, "lo", where);
    const double hi = number(j, "hi", where);
    if (kind == "constant") return CdfSegment::constant(lo, hi, number(j, "value", where));
    if (kind == "linear") return CdfSegment::linear(lo, hi, number(j, "y0", where), number(j, "y1", where));
    if (kind == "affine-cdf" || kind == "affine_cdf") {
        std::vector<ArmPtr> bases = arms_from_json(field(j, "bases", where));
        return CdfSegment::affine_cdf(lo, hi, number(j, "scale", where), number(j, "offset", where), std::move(bases));
    }
    if (kind == "tail-reflect" || kind == "tail_reflect")
        return CdfSegment::tail_reflect(lo, hi, number(j, "anchor", where), number(j, "scale", where),
                                        tail_bound_from_json(field(j, "tail_bound", where)));
    throw InputError(where + ": unknown segment kind '" + kind + "'");
}

}  // namespace

json tail_bound_to_json(const TailBound& tb) {
    if (tb.kind() == TailBound::Kind::power_law)
        return {{"kind", "power-law"}, {"A", tb.A()}, {"beta", tb.beta()}, {"eps0", tb.eps0()}};
    json knots = json::array();
    for (const auto& k : tb.knots()) knots.push_back({k.eps, k.prob});
    return {{"kind", "tabulated"}, {"knots", knots}, {"eps0", tb.eps0()}};
}

TailBound tail_bound_from_json(const json& j) {
    const std::string where = "tail_bound";
    const std::string kind = text(j, "kind", where);
    if (kind == "power-law" || kind == "power_law")
        return TailBound::power_law(number(j, "A", where), number(j, "beta", where), number(j, "eps0", where));
    if (kind == "tabulated") {
        const json& arr = field(j, "knots", where);
        if (!arr.is_array()) throw InputError("tail_bound: 'knots' must be an array of [eps, prob] pairs");
        std::vector<TailKnot> knots;
        for (const json& k : arr) {
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                throw InputError("tail_bound: each knot must be a pair [eps, prob]");
            knots.push_back({k[0].get<double>(), k[1].get<double>()});
        }
        const double eps0 = j.contains("eps0") ? number(j, "eps0", where) : 0.0;
        return TailBound::tabulated(std::move(knots), eps0);
    }
    throw InputError("tail_bound: unknown kind '" + kind + "' (expected power-law or tabulated)");
}

json arm_to_json(const ArmModel& arm) {
    switch (arm.family()) {
        case ArmModel::Family::uniform: {
            const auto& u = arm.as_uniform();
            return {{"family", "uniform"}, {"a", u.a}, {"b", u.b}};
        }
        case ArmModel::Family::power_tail: {
            const auto& p = arm.as_power_tail();
            return {{"family", "power-tail"}, {"mu_star", p.mu_star}, {"A", p.A}, {"beta", p.beta}, {"width", p.width}};
        }
        case ArmModel::Family::piecewise_cdf: {
            json segs = json::array();
            for (const auto& s : arm.as_piecewise().segments) segs.push_back(segment_to_json(s));
            return {{"family", "piecewise-cdf"}, {"segments", segs}};
        }
    }
    return nullptr;
}

ArmPtr arm_from_json(const json& j) {
    const std::string where = "arm";
    const std::string family = text(j, "family", where);
    if (family == "uniform") return make_arm(ArmModel::uniform(number(j, "a", where), number(j, "b", where)));
    if (family == "power-tail" || family == "power_tail")
        return make_arm(ArmModel::power_tail(number(j, "mu_star", where), number(j, "A", where),
                                             number(j, "beta", where), number(j, "width", where)));
    if (family == "point-mass" || family == "point_mass")
        return make_arm(ArmModel::point_mass(number(j, "value", where)));
    if (family == "piecewise-cdf" || family == "piecewise_cdf") {
        const json& arr = field(j, "segments", where);
        if (!arr.is_array() || arr.empty()) throw InputError("arm: 'segments' must be a non-empty array");
        std::vector<CdfSegment> segs;
        for (std::size_t i = 0; i < arr.size(); ++i)
            segs.push_back(segment_from_json(arr[i], "segment " + std::to_string(i)));
        return make_arm(ArmModel::piecewise(std::move(segs)));
    }
    throw InputError("arm: unknown family '" + family + "'");
}

json arms_to_json(const std::vector<ArmPtr>& arms) {
    json out = json::array();
    for (std::size_t i = 0; i < arms.size();) {
        std::size_t run = 1;
        while (i + run < arms.size() && arms[i + run] == arms[i]) ++run;
        json a = arm_to_json(*arms[i]);
        if (run > 1) a["count"] = run;
        out.push_back(std::move(a));
        i += run;
    }
    return out;
}

std::vector<ArmPtr> arms_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("arms: expected a non-empty array");
    std::vector<ArmPtr> arms;
    for (const json& a : j) {
        std::uint64_t count = 1;
        if (a.is_object() && a.contains("count")) {
            count = count_field(a, "count", "arm");
            if (count == 0) throw InputError("arm: 'count' must be at least 1");
        }
        ArmPtr arm = arm_from_json(a);
        arms.insert(arms.end(), count, arm);
    }
    return arms;
}

std::shared_ptr<const BanditInstance> InstanceDocument::build(int certify_grid) const {
    return std::make_shared<const BanditInstance>(arms, *tail_bound, certify_grid);
}

InstanceDocument parse_instance_document(const json& j) {
    try {
        if (!j.is_object()) throw InputError("instance: expected a JSON object");
        InstanceDocument doc;
        doc.tail_bound = std::make_shared<const TailBound>(tail_bound_from_json(field(j, "tail_bound", "instance")));
        doc.arms = arms_from_json(field(j, "arms", "instance"));
        if (auto it = j.find("config"); it != j.end()) {
            if (it->contains("epsilon")) doc.epsilon = number(*it, "epsilon", "config");
            if (it->contains("delta")) doc.delta = number(*it, "delta", "config");
        }
        if (auto it = j.find("experiment"); it != j.end()) {
            const json& e = *it;
            const std::string where = "experiment";
            if (e.contains("policy")) doc.experiment.policy = text(e, "policy", where);
            if (e.contains("trials")) doc.experiment.trials = count_field(e, "trials", where);
            if (e.contains("seed")) doc.experiment.seed = count_field(e, "seed", where);
            if (e.contains("workers")) doc.experiment.workers = static_cast<unsigned>(count_field(e, "workers", where));
            if (e.contains("grid_points"))
                doc.experiment.grid_points = static_cast<int>(count_field(e, "grid_points", where));
        }
        return doc;
    } catch (const json::exception& e) {
        throw InputError(std::string("instance: ") + e.what());
    }
}

InstanceDocument load_instance_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return parse_instance_document(j);
}

json instance_to_json(const BanditInstance& inst, const std::optional<PolicyConfig>& cfg) {
    json j{{"tail_bound", tail_bound_to_json(inst.tail_bound())}, {"arms", arms_to_json(inst.arms())}};
    if (cfg) j["config"] = {{"epsilon", cfg->epsilon}, {"delta", cfg->delta}};
    return j;
}

json bound_report_to_json(const BoundReport& r) {
    json terms = json::array();
    for (double t : r.per_arm_terms) terms.push_back(num(t));
    return {{"value", num(r.value)},
            {"per_arm_terms", terms},
            {"constant_term", num(r.constant_term)},
            {"flags",
             {{"concavity_ok", r.flags.concavity_ok},
              {"delta_ok", r.flags.delta_ok},
              {"epsilon_ok", r.flags.epsilon_ok},
              {"L_ok", r.flags.L_ok},
              {"violations", r.flags.violations()}}},
            {"excluded_arm", opt(r.excluded_arm)},
            {"exact_count", opt(r.exact_count)}};
}

json robustness_to_json(const RobustnessReport& r) {
    return {{"alpha", num(r.alpha)},
            {"eps_prime", num(r.eps_prime)},
            {"beyond_domain", r.beyond_domain},
            {"delta_prime", num(r.delta_prime)},
            {"complexity_bound", opt(r.complexity_bound)},
            {"violations", r.flags.violations()}};
}

json assumption_to_json(const AssumptionReport& a) {
    return {{"certified", a.certified},
            {"worst_violation", num(a.worst_violation)},
            {"worst_arm", a.worst_arm},
            {"worst_eps", num(a.worst_eps)},
            {"min_ratio", num(a.min_ratio)}};
}

json hypothesis_to_json(const HypothesisInstance& h, const AssumptionReport& verified) {
    json target = h.modified_arm ? json(*h.modified_arm) : json("unified");
    return {{"target", target},
            {"case", to_string(h.case_tag)},
            {"gamma", num(h.params.gamma)},
            {"p_eps", opt(h.params.p_eps)},
            {"mu_bar", num(h.params.mu_bar)},
            {"f_mu_bar", num(h.params.f_mu_bar)},
            {"t_k", num(h.params.t_k)},
            {"base_max", num(h.base->mu_star())},
            {"new_max", num(h.lifted_max)},
            {"modified_sup", num(h.modified_cdf->mu_star())},
            {"concavity_ok", h.concavity_ok},
            {"assumption", assumption_to_json(verified)}};
}

json report_to_json(const ExperimentReport& rep) {
    json per_arm = json::array();
    for (double m : rep.samples.per_arm_mean) per_arm.push_back(num(m));
    const BoundComparison& b = rep.bounds;
    json cmp{{"policy", to_string(b.policy)},
             {"empirical_mean", opt(b.empirical_mean)},
             {"lower", bound_report_to_json(b.lower)},
             {"upper", bound_report_to_json(b.upper)},
             {"ratio_upper_to_empirical", opt(b.ratio_upper_to_empirical)},
             {"robustness", b.robustness ? robustness_to_json(*b.robustness) : json(nullptr)}};
    return {{"policy", to_string(rep.policy)},
            {"epsilon", num(rep.cfg.epsilon)},
            {"delta", num(rep.cfg.delta)},
            {"seed", rep.master_seed},
            {"num_arms", rep.num_arms},
            {"reference_max", num(rep.reference_max)},
            {"trials", rep.trials},
            {"failures", rep.failures},
            {"safety_cap_hits", rep.safety_cap_hits},
            {"correctness",
             {{"rate", num(rep.correctness.rate)},
              {"wilson_low", num(rep.correctness.wilson_low)},
              {"wilson_high", num(rep.correctness.wilson_high)}}},
            {"sample_stats",
             {{"mean", num(rep.samples.mean)},
              {"stddev", num(rep.samples.stddev)},
              {"min", rep.samples.min},
              {"max", rep.samples.max},
              {"per_arm_mean", per_arm}}},
            {"returned_value",
             {{"mean", num(rep.mean_returned)}, {"min", num(rep.min_returned)}, {"max", num(rep.max_returned)}}},
            {"assumption", assumption_to_json(rep.assumption)},
            {"deterministic_cap", opt(rep.deterministic_cap)},
            {"bound_comparison", cmp}};
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records, std::size_t num_arms) {
    os << "trial,V,T,failed";
    for (std::size_t k = 0; k < num_arms; ++k) os << ",count_" << k;
    os << '\n';
    for (const auto& r : records) {
        os << r.trial << ',' << format_full(r.returned_value) << ',' << r.total_samples << ','
           << (r.failed ? 1 : 0);
        for (std::size_t k = 0; k < num_arms; ++k) os << ',' << (k < r.per_arm_counts.size() ? r.per_arm_counts[k] : 0);
        os << '\n';
    }
}

std::string format_full(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_sig3(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    if (x == 0.0) return "0";
    const double ax = std::fabs(x);
    int e = static_cast<int>(std::floor(std::log10(ax)));
    // Truncate, with a nudge so values like 0.3 - 1e-17 keep their digits.
    double digits = std::floor(ax / std::pow(10.0, e - 2) * (1.0 + 1e-12));
    if (digits >= 1000.0) {
        digits = std::floor(digits / 10.0);
        ++e;
    } else if (digits < 100.0) {
        digits = std::floor(ax / std::pow(10.0, e - 3) * (1.0 + 1e-12));
        --e;
    }
    const double t = std::copysign(digits * std::pow(10.0, e - 2), x);
    char buf[64];
    std::string s;
    if (ax >= 1e4 || ax < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.2e", t);
        s = buf;
        const auto pos = s.find('e');
        std::string mant = s.substr(0, pos);
        const int exp = std::stoi(s.substr(pos + 1));
        while (mant.back() == '0') mant.pop_back();
        if (mant.back() == '.') mant.pop_back();
        return mant + "e" + std::to_string(exp);
    }
    std::snprintf(buf, sizeof buf, "%.*f", std::max(0, 2 - e), t);
    s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

}  // namespace maxbandit::io
