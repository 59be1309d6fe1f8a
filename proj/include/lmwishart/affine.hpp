#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "lmwishart/error.hpp"

namespace lmw {

using Rational = mpq_class;

/// Parses "p", "p/q" or a decimal such as "-0.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  auto dot = s.find('.');
  if (dot != std::string::npos && s.find('/') == std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    s = digits + "/" + den;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw ParseError("not a rational number: '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// A shape parameter: alpha_k (k = 1..r) or beta_k (k = 2..r).
struct Symbol {
  enum class Kind { Alpha, Beta };
  Kind kind = Kind::Alpha;
  int index = 1;

  static Symbol alpha(int k) { return {Kind::Alpha, k}; }
  static Symbol beta(int k) { return {Kind::Beta, k}; }

  std::string name() const { return (kind == Kind::Alpha ? "alpha_" : "beta_") + std::to_string(index); }
  /// Position among the 2r - 1 variables: alphas first, then betas.
  int variable(int r) const { return kind == Kind::Alpha ? index - 1 : r + index - 2; }

  static Symbol parse(const std::string& name) {
    auto us = name.find('_');
    if (us == std::string::npos) throw ParseError("bad symbol name '" + name + "'");
    std::string head = name.substr(0, us);
    int k = 0;
    try {
      k = std::stoi(name.substr(us + 1));
    } catch (const std::exception&) {
      throw ParseError("bad symbol index in '" + name + "'");
    }
    if (head == "alpha" && k >= 1) return alpha(k);
    if (head == "beta" && k >= 2) return beta(k);
    throw ParseError("bad symbol name '" + name + "'");
  }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Symbol at a variable position for r cliques.
inline Symbol symbol_at(int variable, int r) {
  return variable < r ? Symbol::alpha(variable + 1) : Symbol::beta(variable - r + 2);
}

/// Exact affine function sum_s c_s * s + constant of the shape parameters.
/// Zero coefficients are never stored, so equality is structural.
class AffineForm {
 public:
  AffineForm() = default;
  AffineForm(const Rational& c) : constant_(c) {}  // NOLINT: implicit constant lift
  AffineForm(int c) : constant_(c) {}               // NOLINT
  AffineForm(Symbol s) { coeffs_[s] = 1; }          // NOLINT

  const std::map<Symbol, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(Symbol s) const {
    auto it = coeffs_.find(s);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  bool is_constant() const { return coeffs_.empty(); }

  void add_term(Symbol s, const Rational& c) {
    Rational v = coeff(s) + c;
    if (v == 0)
      coeffs_.erase(s);
    else
      coeffs_[s] = v;
  }

  AffineForm& operator+=(const AffineForm& o) {
    for (const auto& [s, c] : o.coeffs_) add_term(s, c);
    constant_ += o.constant_;
    return *this;
  }
  AffineForm& operator-=(const AffineForm& o) {
    for (const auto& [s, c] : o.coeffs_) add_term(s, -c);
    constant_ -= o.constant_;
    return *this;
  }
  AffineForm& operator*=(const Rational& k) {
    if (k == 0) {
      coeffs_.clear();
      constant_ = 0;
      return *this;
    }
    for (auto& [s, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
  }
  friend AffineForm operator+(AffineForm a, const AffineForm& b) { return a += b; }
  friend AffineForm operator-(AffineForm a, const AffineForm& b) { return a -= b; }
  friend AffineForm operator-(AffineForm a) { return a *= Rational(-1); }
  friend AffineForm operator*(const Rational& k, AffineForm a) { return a *= k; }
  friend AffineForm operator*(AffineForm a, const Rational& k) { return a *= k; }

  friend bool operator==(const AffineForm& a, const AffineForm& b) { return a.coeffs_ == b.coeffs_ && a.constant_ == b.constant_; }

  /// Exact value; x is indexed by Symbol::variable(r).
  Rational evaluate(const std::vector<Rational>& x, int r) const {
    Rational v = constant_;
    for (const auto& [s, c] : coeffs_) v += c * x.at(static_cast<std::size_t>(s.variable(r)));
    return v;
  }
  double evaluate(const std::vector<double>& x, int r) const {
    double v = constant_.get_d();
    for (const auto& [s, c] : coeffs_) v += c.get_d() * x.at(static_cast<std::size_t>(s.variable(r)));
    return v;
  }

  /// Dense coefficient row over 2r - 1 variables.
  std::vector<Rational> row(int r) const {
    std::vector<Rational> out(static_cast<std::size_t>(2 * r - 1), Rational(0));
    for (const auto& [s, c] : coeffs_) {
      int v = s.variable(r);
      if (v < 0 || v >= 2 * r - 1) throw Error("symbol " + s.name() + " out of range for r = " + std::to_string(r));
      out[static_cast<std::size_t>(v)] = c;
    }
    return out;
  }

  /// Renames every symbol through f.
  template <class F>
  AffineForm renamed(F&& f) const {
    AffineForm out(constant_);
    for (const auto& [s, c] : coeffs_) out.add_term(f(s), c);
    return out;
  }

  /// Human-readable form such as "alpha_1 + alpha_2 - beta_2 + 5/2".
  std::string to_string() const {
    std::string out;
    auto term = [&](const Rational& c, const std::string& name) {
      Rational a = abs(c);
      if (out.empty())
        out += c < 0 ? "-" : "";
      else
        out += c < 0 ? " - " : " + ";
      if (name.empty())
        out += a.get_str();
      else
        out += (a == 1 ? "" : a.get_str() + "*") + name;
    };
    for (const auto& [s, c] : coeffs_) term(c, s.name());
    if (constant_ != 0 || out.empty()) term(constant_, "");
    return out;
  }

 private:
  std::map<Symbol, Rational> coeffs_;
  Rational constant_ = 0;
};

inline AffineForm alpha(int k) { return AffineForm(Symbol::alpha(k)); }
inline AffineForm beta(int k) { return AffineForm(Symbol::beta(k)); }
inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace lmw
