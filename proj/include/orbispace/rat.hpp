#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orbi {

// Exact arithmetic carriers. cpp_rational keeps values gcd-reduced with a
// positive denominator, so equality of values is equality of representations.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class ErrorCode {
    InvalidInput,
    CapExceeded,
    InternalContradiction,
    Not1Stable,
    NotAClass,
    NoReducibleClass,
    MixedConjugationOnClass,
    InconsistentAd,
    NotOrthogonal,
    WeightsDontSpan,
    NonSaturatedLattice,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

const char* error_name(ErrorCode code);

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Floor division works for negative numerators as well.
Int rat_floor(const Rat& r);

// Representative of r in [0, 1).
Rat mod1(const Rat& r);

bool is_integer(const Rat& r);

double to_double(const Rat& r);

// Accepts "p", "-p" or "p/q"; q must be nonzero.
Rat parse_rat(const std::string& text);

std::string rat_str(const Rat& r);
std::string int_str(const Int& v);

Int int_gcd(const Int& a, const Int& b);
Int int_lcm(const Int& a, const Int& b);

}  // namespace orbi
