#include "ncr/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace ncr {

Kind Expr::kind() const { return node_->kind; }
Scalar Expr::value() const { return node_->value; }
int Expr::var() const { return node_->var; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

namespace {

Expr make(Kind kind, Scalar value, int var, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  n->var = var;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

bool is_const(const Expr& e) { return e.kind() == Kind::Const; }
bool is_const_value(const Expr& e, Scalar v) { return is_const(e) && e.value() == v; }

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_constant(Scalar c) {
  const double re = c.real(), im = c.imag();
  auto real_text = [](double v) {
    std::string s = format_number(v);
    return (std::signbit(v)) ? "(" + s + ")" : s;
  };
  if (im == 0.0) return real_text(re);
  std::string imag_part = real_text(im) + "*i";
  if (re == 0.0 && !std::signbit(re)) return "(" + imag_part + ")";
  return "(" + real_text(re) + " + " + imag_part + ")";
}

}  // namespace

Expr constant(Scalar c) { return make(Kind::Const, c, 0, {}, {}); }

Expr variable(int j) {
  if (j < 1) throw InputError("variable index must be >= 1");
  return make(Kind::Var, {}, j, {}, {});
}

Expr sum(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return constant(a.value() + b.value());
  return make(Kind::Sum, {}, 0, a, b);
}

Expr product(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return constant(a.value() * b.value());
  return make(Kind::Product, {}, 0, a, b);
}

Expr inverse(const Expr& a) { return make(Kind::Inverse, {}, 0, a, {}); }

Expr star(const Expr& a) {
  if (a.kind() == Kind::Star) return a.child();
  if (is_const(a)) return constant(std::conj(a.value()));
  return make(Kind::Star, {}, 0, a, {});
}

Expr negate(const Expr& a) { return product(constant(-1.0), a); }

Expr difference(const Expr& a, const Expr& b) { return sum(a, negate(b)); }

Expr simplified_sum(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return sum(a, b);
}

Expr simplified_product(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return constant(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  return product(a, b);
}

Expr linear_combination(const std::vector<Scalar>& coeffs, const std::vector<Expr>& terms,
                        double drop_below) {
  Expr acc = constant(0.0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (std::abs(coeffs[i]) <= drop_below) continue;
    acc = simplified_sum(acc, simplified_product(constant(coeffs[i]), terms[i]));
  }
  return acc;
}

std::string format(const Expr& e) {
  std::unordered_map<const Node*, std::string> memo;
  auto rec = [&](auto&& self, const Expr& x) -> std::string {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    std::string out;
    switch (x.kind()) {
      case Kind::Const: out = format_constant(x.value()); break;
      case Kind::Var: out = "x" + std::to_string(x.var()); break;
      case Kind::Sum: out = "(" + self(self, x.lhs()) + " + " + self(self, x.rhs()) + ")"; break;
      case Kind::Product: out = "(" + self(self, x.lhs()) + "*" + self(self, x.rhs()) + ")"; break;
      case Kind::Inverse: out = "inv(" + self(self, x.child()) + ")"; break;
      case Kind::Star: out = "star(" + self(self, x.child()) + ")"; break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Const: return a.value() == b.value();
    case Kind::Var: return a.var() == b.var();
    case Kind::Sum:
    case Kind::Product:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case Kind::Inverse:
    case Kind::Star: return structurally_equal(a.child(), b.child());
  }
  return false;
}

Expr adjoint(const Expr& e) {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    Expr out;
    switch (x.kind()) {
      case Kind::Const: out = constant(std::conj(x.value())); break;
      case Kind::Var: out = x; break;
      case Kind::Sum: out = sum(self(self, x.lhs()), self(self, x.rhs())); break;
      case Kind::Product: out = product(self(self, x.rhs()), self(self, x.lhs())); break;
      case Kind::Inverse: out = inverse(self(self, x.child())); break;
      case Kind::Star: out = x.child(); break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

int tau(const Expr& e) {
  std::unordered_map<const Node*, int> memo;
  auto rec = [&](auto&& self, const Expr& x) -> int {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    int out = 0;
    switch (x.kind()) {
      case Kind::Const: out = 0; break;
      case Kind::Var: out = 1; break;
      case Kind::Sum: out = std::max(self(self, x.lhs()), self(self, x.rhs())); break;
      case Kind::Product: out = self(self, x.lhs()) + self(self, x.rhs()); break;
      case Kind::Inverse: out = 2 * self(self, x.child()); break;
      case Kind::Star: out = self(self, x.child()); break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

NodeCounts count_nodes(const Expr& e) {
  NodeCounts c;
  auto rec = [&](auto&& self, const Expr& x) -> void {
    switch (x.kind()) {
      case Kind::Const: ++c.constants; break;
      case Kind::Var: ++c.symbols; break;
      case Kind::Sum:
      case Kind::Product:
        self(self, x.lhs());
        self(self, x.rhs());
        break;
      case Kind::Inverse:
        ++c.inverses;
        self(self, x.child());
        break;
      case Kind::Star: self(self, x.child()); break;
    }
  };
  rec(rec, e);
  return c;
}

int max_variable(const Expr& e) {
  std::unordered_set<const Node*> seen;
  int best = 0;
  auto rec = [&](auto&& self, const Expr& x) -> void {
    if (!seen.insert(x.get()).second) return;
    switch (x.kind()) {
      case Kind::Const: break;
      case Kind::Var: best = std::max(best, x.var()); break;
      case Kind::Sum:
      case Kind::Product:
        self(self, x.lhs());
        self(self, x.rhs());
        break;
      case Kind::Inverse:
      case Kind::Star: self(self, x.child()); break;
    }
  };
  rec(rec, e);
  return best;
}

std::vector<Expr> subexpressions(const Expr& e, bool star_closed) {
  std::vector<Expr> out;
  std::unordered_set<std::string> keys;
  auto add = [&](const Expr& x) {
    if (keys.insert(format(x)).second) out.push_back(x);
  };
  auto rec = [&](auto&& self, const Expr& x) -> void {
    switch (x.kind()) {
      case Kind::Const:
      case Kind::Var: break;
      case Kind::Sum:
      case Kind::Product:
        self(self, x.lhs());
        self(self, x.rhs());
        break;
      case Kind::Inverse:
      case Kind::Star: self(self, x.child()); break;
    }
    add(x);
  };
  rec(rec, e);
  if (star_closed) {
    const std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) add(adjoint(out[i]));
  }
  return out;
}

Expr shift(const Expr& e, const std::vector<double>& lambda) {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    Expr out;
    switch (x.kind()) {
      case Kind::Const: out = x; break;
      case Kind::Var: {
        const std::size_t j = static_cast<std::size_t>(x.var() - 1);
        const double l = j < lambda.size() ? lambda[j] : 0.0;
        out = (l == 0.0) ? x : sum(x, constant(l));
        break;
      }
      case Kind::Sum: out = sum(self(self, x.lhs()), self(self, x.rhs())); break;
      case Kind::Product: out = product(self(self, x.lhs()), self(self, x.rhs())); break;
      case Kind::Inverse: out = inverse(self(self, x.child())); break;
      case Kind::Star: out = star(self(self, x.child())); break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace ncr
