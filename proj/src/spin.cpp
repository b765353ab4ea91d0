// Copyright 2026 The qreduce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qreduce/spin.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

std::size_t register_dim(std::size_t sites) {
  if (sites == 0 || sites > 6) {
    throw DimensionError("spin register of " + std::to_string(sites) +
                         " sites exceeds dimension cap " + std::to_string(kMaxDim));
  }
  return std::size_t{1} << sites;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t sites) : text_(text), sites_(sites) {}

  SpinExpression parse() {
    SpinExpression expr;
    expr.sites = sites_;
    skip_space();
    if (at_end()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    while (true) {
      SpinTerm term = parse_term();
      term.coefficient *= sign;
      expr.terms.push_back(std::move(term));
      skip_space();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    return expr;
  }

 private:
  SpinTerm parse_term() {
    SpinTerm term;
    bool any = false;
    while (true) {
      skip_space();
      if (at_end() || peek() == '+' || peek() == '-') break;
      if (any && peek() == '*') {
        ++pos_;
        skip_space();
        if (at_end() || peek() == '+' || peek() == '-') fail("expected an operand after '*'");
      }
      if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        term.coefficient *= parse_number();
      } else {
        term.factors.push_back(parse_factor());
      }
      any = true;
    }
    if (!any) fail("expected a term");
    return term;
  }

  double parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  SpinFactor parse_factor() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty()) fail("unexpected character '" + std::string(1, peek()) + "'");
    if (word == "I") return {SpinFactorKind::kIdentity, 0};
    if (word == "TOTAL_SPIN_SQ" || word == "S2") return {SpinFactorKind::kTotalSpinSquared, 0};

    SpinFactorKind kind;
    switch (word.front()) {
      case 'X': kind = SpinFactorKind::kX; break;
      case 'Y': kind = SpinFactorKind::kY; break;
      case 'Z': kind = SpinFactorKind::kZ; break;
      default: fail_at(start, "unknown operator '" + std::string(word) + "'");
    }
    std::size_t site = 0;
    const auto digits = word.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), site);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      fail_at(start, "expected a site number after '" + std::string(1, word.front()) + "'");
    }
    if (site == 0 || site > sites_) {
      fail_at(start, "site " + std::to_string(site) + " outside 1.." + std::to_string(sites_));
    }
    return {kind, site - 1};
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
    throw ParseError("", "column " + std::to_string(column + 1) + ": " + message);
  }

  std::string_view text_;
  std::size_t sites_;
  std::size_t pos_ = 0;
};

ComplexMatrix pauli_of(SpinFactorKind kind) {
  switch (kind) {
    case SpinFactorKind::kX: return pauli::x();
    case SpinFactorKind::kY: return pauli::y();
    case SpinFactorKind::kZ: return pauli::z();
    default: return pauli::identity();
  }
}

}  // namespace

SpinExpression SpinExpression::parse(std::string_view text, std::size_t sites) {
  register_dim(sites);
  return ExpressionParser(text, sites).parse();
}

std::string SpinExpression::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (t > 0) os << (term.coefficient < 0 ? " - " : " + ");
    else if (term.coefficient < 0) os << "-";
    const double mag = std::abs(term.coefficient);
    const bool show_coeff = mag != 1.0 || term.factors.empty();
    if (show_coeff) os << mag;
    for (std::size_t f = 0; f < term.factors.size(); ++f) {
      if (show_coeff || f > 0) os << "*";
      const auto& factor = term.factors[f];
      switch (factor.kind) {
        case SpinFactorKind::kIdentity: os << "I"; break;
        case SpinFactorKind::kX: os << "X" << factor.site + 1; break;
        case SpinFactorKind::kY: os << "Y" << factor.site + 1; break;
        case SpinFactorKind::kZ: os << "Z" << factor.site + 1; break;
        case SpinFactorKind::kTotalSpinSquared: os << "TOTAL_SPIN_SQ"; break;
      }
    }
  }
  return os.str();
}

ComplexMatrix embed_pauli(const ComplexMatrix& pauli, std::size_t site, std::size_t sites) {
  register_dim(sites);
  if (site >= sites) throw DimensionError("site index out of range");
  ComplexMatrix out = site == 0 ? pauli : pauli::identity();
  for (std::size_t s = 1; s < sites; ++s) out = tensor(out, s == site ? pauli : pauli::identity());
  return out;
}

ComplexMatrix total_spin_squared(std::size_t sites) {
  const std::size_t dim = register_dim(sites);
  ComplexMatrix out(dim);
  for (const auto& p : {pauli::x(), pauli::y(), pauli::z()}) {
    ComplexMatrix component(dim);
    for (std::size_t s = 0; s < sites; ++s) component += embed_pauli(p, s, sites);
    out += matmul(component, component);
  }
  return 0.5 * out;
}

ComplexMatrix build_spin_operator(const SpinExpression& expr, double tol) {
  const std::size_t dim = register_dim(expr.sites);
  ComplexMatrix out(dim);
  for (const auto& term : expr.terms) {
    ComplexMatrix product = ComplexMatrix::identity(dim);
    for (const auto& factor : term.factors) {
      switch (factor.kind) {
        case SpinFactorKind::kIdentity: break;
        case SpinFactorKind::kTotalSpinSquared:
          product = matmul(product, total_spin_squared(expr.sites));
          break;
        default:
          product = matmul(product, embed_pauli(pauli_of(factor.kind), factor.site, expr.sites));
      }
    }
    out += term.coefficient * product;
  }
  if (!out.is_hermitian(tol)) throw NotHermitianError("spin expression is not Hermitian");
  return out;
}

ComplexMatrix build_spin_operator(std::string_view text, std::size_t sites, double tol) {
  return build_spin_operator(SpinExpression::parse(text, sites), tol);
}

ComplexVector spin_product_state(std::string_view signs) {
  const std::size_t dim = register_dim(signs.size());
  std::size_t index = 0;
  for (char c : signs) {
    if (c != '+' && c != '-') throw InvalidArgument("product state sign must be '+' or '-'");
    index = index * 2 + (c == '-' ? 1 : 0);
  }
  return ComplexVector::basis(dim, index);
}

}  // namespace qreduce
