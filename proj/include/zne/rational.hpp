// Copyright 2026 The zne-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "zne/errors.hpp"

namespace zne {

// Extrapolation coefficients are exact by construction; carrying them as
// arbitrary-precision rationals keeps identities like "coefficients sum to
// one" checkable with == instead of a tolerance.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Numerator/denominator in canonical form (denominator positive).  Throws if
// either component does not fit a 64-bit integer; in practice plan
// coefficients are tiny.
inline std::pair<std::int64_t, std::int64_t> to_int64_pair(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  using boost::multiprecision::cpp_int;
  const cpp_int lo = std::numeric_limits<std::int64_t>::min();
  const cpp_int hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den < lo || den > hi) {
    throw ValidationError("rational component does not fit 64 bits");
  }
  return {num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>()};
}

}  // namespace zne
