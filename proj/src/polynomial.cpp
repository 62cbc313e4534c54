#include "hullsing/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hullsing/errors.hpp"

namespace hullsing {

Polynomial Polynomial::constant(double c) {
  Polynomial out;
  out.add_term(Exponent{}, c);
  return out;
}

Polynomial Polynomial::variable(int index, double coeff) {
  Exponent e{};
  e[index] = 1;
  return monomial(e, coeff);
}

Polynomial Polynomial::monomial(const Exponent& e, double coeff) {
  Polynomial out;
  out.add_term(e, coeff);
  return out;
}

void Polynomial::add_term(const Exponent& e, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto k : e) d += k;
    deg = std::max(deg, d);
  }
  return deg;
}

int Polynomial::fiber_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) deg = std::max(deg, e[0] + e[1] + e[2]);
  return deg;
}

int Polynomial::weighted_degree(const std::array<int, kNumVars>& weights) const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int i = 0; i < kNumVars; ++i) d += weights[i] * e[i];
    deg = std::max(deg, d);
  }
  return deg;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e;
      for (int i = 0; i < kNumVars; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > tol) out.terms_.emplace(e, c);
  }
  return out;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string Polynomial::to_string(const VarNames& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool is_const = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    bool wrote = false;
    if (mag != 1.0 || is_const) {
      os << mag;
      wrote = true;
    }
    for (int i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << names[i];
      if (e[i] > 1) os << "^" << int(e[i]);
      wrote = true;
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarNames& names) : text_(text), names_(names) {}

  Polynomial parse() {
    Polynomial out;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = get() == '-' ? -1.0 : 1.0;
    }
    parse_term(out, sign);
    while (true) {
      skip_ws();
      if (at_end()) break;
      char c = get();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
      parse_term(out, c == '-' ? -1.0 : 1.0);
    }
    return out;
  }

 private:
  void parse_term(Polynomial& out, double sign) {
    double coeff = sign;
    Exponent e{};
    bool any = false;
    while (true) {
      skip_ws();
      if (at_end()) break;
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= parse_number();
        skip_ws();
        if (!at_end() && peek() == '/') {
          get();
          skip_ws();
          double den = parse_number();
          if (den == 0.0) fail("division by zero");
          coeff /= den;
        }
        any = true;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        int var = parse_var();
        int power = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          get();
          skip_ws();
          power = static_cast<int>(parse_number());
          if (power < 0) fail("negative exponent");
        }
        e[var] = static_cast<std::uint8_t>(e[var] + power);
        any = true;
      } else if (c == '*') {
        get();
        continue;
      } else {
        break;
      }
    }
    if (!any) fail("empty term");
    out.add_term(e, coeff);
  }

  double parse_number() {
    char* end = nullptr;
    std::string buf(text_.substr(pos_));
    double v = std::strtod(buf.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - buf.c_str());
    if (used == 0) fail("expected number");
    pos_ += used;
    return v;
  }

  int parse_var() {
    // variable names are single letters, so "px" reads as p*x
    std::size_t start = pos_++;
    std::string_view name = text_.substr(start, pos_ - start);
    for (int i = 0; i < kNumVars; ++i) {
      if (name == names_[i]) return i;
    }
    fail("unknown variable '" + std::string(name) + "'");
    return -1;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::InvalidArgument,
                "polynomial parse error at " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  const VarNames& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, const VarNames& names) {
  return Parser(text, names).parse();
}

Polynomial pow(const Polynomial& base, int exponent) {
  Polynomial out = Polynomial::constant(1.0);
  for (int k = 0; k < exponent; ++k) out = out * base;
  return out;
}

Polynomial compose(const Polynomial& outer, const std::array<Polynomial, kNumVars>& inner) {
  // powers[i][k] = inner[i]^k, built lazily up to the largest exponent used
  std::array<std::vector<Polynomial>, kNumVars> powers;
  for (int i = 0; i < kNumVars; ++i) powers[i].push_back(Polynomial::constant(1.0));
  Polynomial out;
  for (const auto& [e, c] : outer.terms()) {
    Polynomial term = Polynomial::constant(c);
    for (int i = 0; i < kNumVars; ++i) {
      while (static_cast<int>(powers[i].size()) <= e[i]) {
        powers[i].push_back(powers[i].back() * inner[i]);
      }
      if (e[i] > 0) term = term * powers[i][e[i]];
    }
    out += term;
  }
  return out;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& poly) {
  for (const auto& [e, c] : poly.terms()) {
    terms_.push_back({c, e});
    for (auto k : e) max_exponent_ = std::max(max_exponent_, int(k));
  }
}

namespace {

// pw[i*(m+1)+k] = x_i^k
void power_table(const Vector7d& x, int m, std::vector<double>& pw) {
  pw.assign(static_cast<std::size_t>(kNumVars * (m + 1)), 1.0);
  for (int i = 0; i < kNumVars; ++i) {
    for (int k = 1; k <= m; ++k) pw[i * (m + 1) + k] = pw[i * (m + 1) + k - 1] * x[i];
  }
}

}  // namespace

double CompiledPolynomial::value(const Vector7d& x) const {
  thread_local std::vector<double> pw;
  power_table(x, max_exponent_, pw);
  const int stride = max_exponent_ + 1;
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < kNumVars; ++i) v *= pw[i * stride + t.exp[i]];
    sum += v;
  }
  return sum;
}

void CompiledPolynomial::fiber_derivatives(const Vector7d& x, int dim, double& value,
                                           Eigen::Vector3d& grad, Eigen::Matrix3d& hess) const {
  thread_local std::vector<double> pw;
  power_table(x, max_exponent_, pw);
  const int stride = max_exponent_ + 1;
  value = 0.0;
  grad.setZero();
  hess.setZero();
  for (const auto& t : terms_) {
    // product over the non-fiber variables
    double rest = t.coeff;
    for (int i = dim; i < kNumVars; ++i) rest *= pw[i * stride + t.exp[i]];
    if (rest == 0.0) continue;
    double f[3], df[3], ddf[3];
    for (int i = 0; i < dim; ++i) {
      int k = t.exp[i];
      f[i] = pw[i * stride + k];
      df[i] = k >= 1 ? k * pw[i * stride + k - 1] : 0.0;
      ddf[i] = k >= 2 ? k * (k - 1) * pw[i * stride + k - 2] : 0.0;
    }
    double prod = rest;
    for (int i = 0; i < dim; ++i) prod *= f[i];
    value += prod;
    for (int i = 0; i < dim; ++i) {
      double gi = rest * df[i];
      for (int j = 0; j < dim; ++j) {
        if (j != i) gi *= f[j];
      }
      grad[i] += gi;
      for (int j = 0; j < dim; ++j) {
        double hij = rest;
        if (i == j) {
          hij *= ddf[i];
          for (int k = 0; k < dim; ++k) {
            if (k != i) hij *= f[k];
          }
        } else {
          hij *= df[i] * df[j];
          for (int k = 0; k < dim; ++k) {
            if (k != i && k != j) hij *= f[k];
          }
        }
        hess(i, j) += hij;
      }
    }
  }
}

Vector7d CompiledPolynomial::gradient(const Vector7d& x) const {
  thread_local std::vector<double> pw;
  power_table(x, max_exponent_, pw);
  const int stride = max_exponent_ + 1;
  Vector7d g = Vector7d::Zero();
  for (const auto& t : terms_) {
    for (int i = 0; i < kNumVars; ++i) {
      int k = t.exp[i];
      if (k == 0) continue;
      double v = t.coeff * k * pw[i * stride + k - 1];
      for (int j = 0; j < kNumVars; ++j) {
        if (j != i) v *= pw[j * stride + t.exp[j]];
      }
      g[i] += v;
    }
  }
  return g;
}

}  // namespace hullsing
