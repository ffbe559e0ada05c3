#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace cam {

// Word lengths grow super-exponentially (hundreds of bits by level 40),
// so all lengths and absolute positions are arbitrary-precision.
using Nat = boost::multiprecision::cpp_int;

inline std::string to_string(const Nat& n) { return n.str(); }

// Nat -> size_t, only when the caller has already checked the range.
inline std::size_t to_size(const Nat& n) { return static_cast<std::size_t>(n); }

inline bool fits_size(const Nat& n, std::size_t cap) {
    return n >= 0 && n <= Nat(cap);
}

}  // namespace cam
