#pragma once

// JSON forms of the exact objects. Rationals are strings "p/q"; depths are
// integers or "exact". Ring elements are read against a known RingTag:
//   Fourier   [[n, re, im?], ...]      c e^{inx}, im omitted when 0
//   Q[x]      [[d, c], ...]            c x^d
//   z-series  [base_0, base_1, ...]    sum z^m base_m, at most z_max + 1 entries
// Every reader throws Error(parse_error) on malformed input.

#include "kpf/kp.hpp"

#include "json.hpp"

namespace kpf::io {

using nlohmann::json;

json to_json(const Rational &r);
Rational rational_from_json(const json &j);

// "fourier" | "poly" | "fourier-z" | "poly-z"; z_max is required (>= 0) for
// the z rings and ignored otherwise.
RingTag parse_ring(const std::string &name, int z_max);
std::string ring_name(const RingTag &tag);
json to_json(const RingTag &tag); // {"ring": name, "z_max": n}
RingTag ring_from_json(const json &j);

json to_json(const RingElem &e);
RingElem ring_elem_from_json(const json &j, const RingTag &tag);

json to_json(const Scalar &s); // [[re, im], ...] per power of z
json depth_json(int depth);
int depth_from_json(const json &j);

// {"depth": d, "coeffs": [{"order": a, "coeff": elem}, ...]}; a missing depth
// means exact.
json to_json(const PsiOp &p);
PsiOp psi_op_from_json(const json &j, const RingTag &tag);

json to_json(const TimeMonomial &m); // exponent vector
TimeMonomial monomial_from_json(const json &j);

// {"v_max": n, "barred": b, "slots": [{"t": [...], "op": ...}, ...]}
json to_json(const TPsiSeries &s);
TPsiSeries t_series_from_json(const json &j, const RingTag &tag);

json to_json(const ScalarTSeries &s);
json to_json(const RingTSeries &s);

// Input file of `solve` and `dressing`: {"kind": "LaxOp", "ring": ..., "z_max": ..., "op": PsiOp}.
json lax_input_to_json(const LaxOp &l);
LaxOp lax_input_from_json(const json &j);

// Input file of `factorize`: {"kind": "TPsiSeries", "ring": ..., "z_max": ..., "series": TPsiSeries}.
json series_input_to_json(const TPsiSeries &s);
TPsiSeries series_input_from_json(const json &j);

// Residual objects with more than `cap` non-zero slots are left out and
// flagged "residual_truncated".
json to_json(const CheckOutcome &c, int cap = 64);

} // namespace kpf::io
