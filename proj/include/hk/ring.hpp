#ifndef HK_RING_HPP
#define HK_RING_HPP

#include <concepts>
#include <stdexcept>
#include <string>

#include "hk/diffpoly.hpp"
#include "hk/laurent.hpp"
#include "hk/ratfunc.hpp"

namespace hk {

// Uniform access to the differential rings used as operator coefficients.
// RatFunc differentiates in x only, so bivariate kernels in (x, y) work too.
namespace ring {

inline Rat derive(const Rat &) { return Rat(0); }
inline RatFunc derive(const RatFunc &r) { return r.derivative(Var::X); }
inline DiffPoly derive(const DiffPoly &p) { return p.derivative(); }
inline LaurentH derive(const LaurentH &p) { return p.derivative(); }

inline bool is_zero(const Rat &r) { return r.is_zero(); }
inline bool is_zero(const RatFunc &r) { return r.is_zero(); }
inline bool is_zero(const DiffPoly &p) { return p.is_zero(); }
inline bool is_zero(const LaurentH &p) { return p.is_zero(); }

inline bool is_unit(const Rat &r) { return !r.is_zero(); }
inline bool is_unit(const RatFunc &r) { return !r.is_zero(); }
inline bool is_unit(const DiffPoly &p) { return p.is_constant() && !p.is_zero(); }
inline bool is_unit(const LaurentH &p) { return p.is_monomial(); }

inline Rat inverse(const Rat &r) { return r.inverse(); }
inline RatFunc inverse(const RatFunc &r) { return r.inverse(); }
inline DiffPoly inverse(const DiffPoly &p) {
  if (!is_unit(p)) throw std::domain_error("DiffPoly: not a unit");
  return DiffPoly(p.constant_value().inverse());
}
inline LaurentH inverse(const LaurentH &p) { return p.inverse(); }

// Whether some iterated derivative vanishes, so D^-k r has a finite expansion.
inline bool derivatives_terminate(const Rat &) { return true; }
inline bool derivatives_terminate(const RatFunc &r) { return !r.den().depends_on(Var::X); }
inline bool derivatives_terminate(const DiffPoly &p) { return p.is_constant(); }
inline bool derivatives_terminate(const LaurentH &p) { return p.is_zero() || p.terms().begin()->first >= 0; }

inline std::string str(const Rat &r) { return r.str(); }
inline std::string str(const RatFunc &r) { return r.str(); }
inline std::string str(const DiffPoly &p) { return p.str(); }
inline std::string str(const LaurentH &p) { return p.str(); }

}  // namespace ring

template <class R>
concept DifferentialRing = requires(const R &a, const R &b) {
  R(0);
  R(1);
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { a == b } -> std::convertible_to<bool>;
  { ring::derive(a) } -> std::convertible_to<R>;
  { ring::is_zero(a) } -> std::convertible_to<bool>;
  { ring::derivatives_terminate(a) } -> std::convertible_to<bool>;
  { ring::str(a) } -> std::convertible_to<std::string>;
};

}  // namespace hk

#endif  // HK_RING_HPP
