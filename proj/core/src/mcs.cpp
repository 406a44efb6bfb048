#include <akita/mcs.hpp>

#include <akita/error.hpp>

namespace akita {

using boost::multiprecision::cpp_int;

std::string_view to_string(Criticality c) noexcept {
    return c == Criticality::hi ? "HI" : "LO";
}

std::string_view to_string(AdmissionCondition c) noexcept {
    switch (c) {
    case AdmissionCondition::none: return "none";
    case AdmissionCondition::lo_mode_capacity: return "lo_mode_capacity";
    case AdmissionCondition::hi_mode_capacity: return "hi_mode_capacity";
    case AdmissionCondition::edf_capacity: return "edf_capacity";
    }
    return "unknown";
}

void validate(const VCpuSpec& spec) {
    if (spec.period == Duration::zero()) throw ValidationError("period", "must be positive");
    if (spec.c_opt == Duration::zero()) throw ValidationError("c_opt", "must be positive");
    if (spec.c_opt > spec.period) throw ValidationError("c_opt", "exceeds the period");
    if (spec.criticality == Criticality::hi) {
        if (!spec.c_pes) throw ValidationError("c_pes", "required for a HI vCPU");
        if (*spec.c_pes < spec.c_opt) throw ValidationError("c_pes", "smaller than c_opt");
        if (*spec.c_pes > spec.period) throw ValidationError("c_pes", "exceeds the period");
    } else if (spec.c_pes) {
        throw ValidationError("c_pes", "a LO vCPU has no pessimistic budget");
    }
}

namespace {

Rational ratio(Duration num, Duration den) {
    return Rational(cpp_int(num.count()), cpp_int(den.count()));
}

}  // namespace

UtilSummary compute_utilizations(std::span<const VCpuSpec> specs) {
    UtilSummary u;
    for (const auto& s : specs) {
        validate(s);
        if (s.criticality == Criticality::lo) {
            u.u1_1 += ratio(s.c_opt, s.period);
        } else {
            u.u2_1 += ratio(s.c_opt, s.period);
            u.u2_2 += ratio(*s.c_pes, s.period);
        }
    }
    return u;
}

Rational compute_scaling_factor(const UtilSummary& u) {
    if (u.u1_1 >= 1) {
        throw InfeasibleError("LO utilization " + to_fraction_string(u.u1_1) +
                              " saturates the core");
    }
    return u.u2_1 / (1 - u.u1_1);
}

std::string AdmissionResult::reason() const {
    switch (failed) {
    case AdmissionCondition::none:
        return "accepted";
    case AdmissionCondition::lo_mode_capacity:
        return "U1(1) + U2(1) = " + to_fixed6(util.u1_1 + util.u2_1) + " > 1 (U1(1) = " +
               to_fixed6(util.u1_1) + ", U2(1) = " + to_fixed6(util.u2_1) + ")";
    case AdmissionCondition::hi_mode_capacity:
        return "x*U1(1) + U2(2) = " + to_fixed6(hi_bound.value_or(0)) + " > 1 (x = " +
               to_fixed6(x.value_or(0)) + ", U1(1) = " + to_fixed6(util.u1_1) +
               ", U2(2) = " + to_fixed6(util.u2_2) + ")";
    case AdmissionCondition::edf_capacity:
        return "sum C_opt/T = " + to_fixed6(util.u1_1 + util.u2_1) + " > 1";
    }
    return "rejected";
}

AdmissionResult admission_test(std::span<const VCpuSpec> specs) {
    AdmissionResult r;
    r.util = compute_utilizations(specs);
    if (r.util.u1_1 < 1) {
        r.x = compute_scaling_factor(r.util);
    } else if (r.util.u2_1 == 0) {
        // no HI vCPUs: nothing to shrink, x is taken as its limit 0
        r.x = Rational(0);
    }
    if (r.x) r.hi_bound = *r.x * r.util.u1_1 + r.util.u2_2;
    if (r.util.u1_1 + r.util.u2_1 > 1) {
        r.accepted = false;
        r.failed = AdmissionCondition::lo_mode_capacity;
    } else if (*r.hi_bound > 1) {
        r.accepted = false;
        r.failed = AdmissionCondition::hi_mode_capacity;
    }
    return r;
}

AdmissionResult edf_admission_test(std::span<const VCpuSpec> specs) {
    AdmissionResult r;
    r.util = compute_utilizations(specs);
    if (r.util.u1_1 + r.util.u2_1 > 1) {
        r.accepted = false;
        r.failed = AdmissionCondition::edf_capacity;
    }
    return r;
}

TimePoint virtual_deadline(const VCpuSpec& spec, TimePoint now, const Rational& x) {
    if (spec.criticality == Criticality::lo) return now + spec.period;
    const Rational shrunk = x * cpp_int(spec.period.count());
    const cpp_int floor_us = numerator(shrunk) / denominator(shrunk);
    return now + Duration{floor_us.convert_to<std::uint64_t>()};
}

}  // namespace akita
