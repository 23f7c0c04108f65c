/*
 * Copyright 2026 The ksg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KSG_RATIONAL_HPP
#define KSG_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ksg {

// mpq_class keeps values canonical (lowest terms, positive denominator)
// as long as every constructed value goes through canonicalize().
using Rational = mpq_class;

/// Parses "num/den" or "num". Throws SchemaError on malformed text.
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "1/1", "1/2".
std::string format_rational(const Rational &q);

inline Rational make_rational(long num, long den)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}

#endif
