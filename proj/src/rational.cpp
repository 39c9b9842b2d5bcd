#include "qcache/rational.hpp"

#include <stdexcept>

namespace qcache {

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      Rat r(text);
      r.canonicalize();
      return r;
    }
    mpz_class num(text.substr(0, slash));
    mpz_class den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational: '" + text + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string rat_to_decimal(const Rat& r, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpq_class scaled = r * scale;
  mpz_class num = scaled.get_num(), den = scaled.get_den();
  mpz_class q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  // round half up on the remainder
  if (rem * 2 >= den) q += 1;
  bool neg = q < 0;
  mpz_class a = neg ? mpz_class(-q) : q;
  std::string s = a.get_str();
  if (digits == 0) return (neg ? "-" : "") + s;
  if (static_cast<int>(s.size()) <= digits)
    s = std::string(static_cast<std::size_t>(digits + 1 - static_cast<int>(s.size())), '0') + s;
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return (neg ? "-" : "") + s;
}

}  // namespace qcache
