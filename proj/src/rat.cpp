#include "orbispace/rat.hpp"

namespace orbi {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::InternalContradiction: return "InternalContradiction";
        case ErrorCode::Not1Stable: return "Not1Stable";
        case ErrorCode::NotAClass: return "NotAClass";
        case ErrorCode::NoReducibleClass: return "NoReducibleClass";
        case ErrorCode::MixedConjugationOnClass: return "MixedConjugationOnClass";
        case ErrorCode::InconsistentAd: return "InconsistentAd";
        case ErrorCode::NotOrthogonal: return "NotOrthogonal";
        case ErrorCode::WeightsDontSpan: return "WeightsDontSpan";
        case ErrorCode::NonSaturatedLattice: return "NonSaturatedLattice";
    }
    return "Unknown";
}

Int rat_floor(const Rat& r) {
    Int n = rat_num(r);
    Int d = rat_den(r);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

Rat mod1(const Rat& r) { return r - Rat(rat_floor(r)); }

bool is_integer(const Rat& r) { return rat_den(r) == 1; }

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(Int(text));
        }
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) throw Error(ErrorCode::InvalidInput, "rational with zero denominator: " + text);
        return Rat(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "malformed rational: " + text);
    }
}

std::string rat_str(const Rat& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

std::string int_str(const Int& v) { return v.str(); }

Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

Int int_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

}  // namespace orbi
