#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <stdexcept>
#include <string>

namespace qsys {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

// Input/contract violations (bad files, bad dimensions, lines inside the
// singular locus, ...).  Mapped to exit code 2 by the CLI.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures (step-size underflow, lost invertibility, fits that do
// not converge).  Mapped to exit code 3 by the CLI.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline double to_double(const BigInt& v) { return static_cast<double>(v); }
inline double to_double(const BigRat& v) { return static_cast<double>(v); }

}  // namespace qsys
