#pragma once

#include <gmpxx.h>

#include <string>

namespace qcache {

using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// "n/d" or "n"; exact.
Rat parse_rat(const std::string& text);

std::string rat_to_string(const Rat& r);

// Fixed-point decimal rendering (round half away from zero), exact input.
std::string rat_to_decimal(const Rat& r, int digits);

}  // namespace qcache
