// Copyright 2026 The Authors.
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

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// Sorted multiset of variable ids.
using Monomial = std::vector<std::string>;

/// Sparse polynomial with rational coefficients. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
class MultiPoly {
 public:
  MultiPoly() = default;

  static MultiPoly constant(const Rational& c) {
    MultiPoly p;
    p.add_term({}, c);
    return p;
  }

  static MultiPoly variable(const std::string& id) {
    MultiPoly p;
    p.add_term({id}, Rational(1));
    return p;
  }

  void add_term(Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    std::sort(m.begin(), m.end());
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(Monomial m) const {
    std::sort(m.begin(), m.end());
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Largest monomial size; 0 for the zero polynomial.
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.size());
    return d;
  }

  bool is_homogeneous() const {
    const std::size_t d = degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return t.first.size() == d; });
  }

  /// Every variable must be present in `values`.
  Rational evaluate(const std::map<std::string, Rational>& values) const {
    Rational total;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& id : m) {
        auto it = values.find(id);
        if (it == values.end()) {
          throw Error(ErrorKind::kInput, "no value for variable '" + id + "'");
        }
        t *= it->second;
      }
      total += t;
    }
    return total;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        m.reserve(ma.size() + mb.size());
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(),
                   std::back_inserter(m));
        out.add_term(std::move(m), ca * cb);
      }
    }
    return out;
  }

  friend MultiPoly operator*(const Rational& s, const MultiPoly& p) {
    MultiPoly out;
    for (const auto& [m, c] : p.terms_) out.add_term(m, s * c);
    return out;
  }

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  /// Human-readable form in monomial order, e.g. "-z0^2 + 2*z0*z01".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = abs(c);
      if (first) {
        if (c.sign() < 0) out += "-";
      } else {
        out += c.sign() < 0 ? " - " : " + ";
      }
      first = false;
      std::string body;
      for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        if (!body.empty()) body += "*";
        body += "z" + m[i];
        if (j - i > 1) body += "^" + std::to_string(j - i);
        i = j;
      }
      if (body.empty()) {
        out += mag.str();
      } else if (mag == Rational(1)) {
        out += body;
      } else {
        out += mag.str() + "*" + body;
      }
    }
    return out;
  }

 private:
  std::map<Monomial, Rational> terms_;
};

}  // namespace normcx
