#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace seqcomplex {

// All grid values, thresholds and game values are exact rationals; floating
// point enters only for final real-valued reductions (sqrt, log, exp).
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& i) { return i.convert_to<double>(); }

inline int sign_of(const Rat& r) { return r.sign(); }

inline Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

std::string rat_to_string(const Rat& r);

// Accepts "p/q", plain integers, and decimal literals ("0.25"); all parsed exactly.
Rat rat_from_string(const std::string& text);

}  // namespace seqcomplex
