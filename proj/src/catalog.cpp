#include "fhlab/catalog.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fhlab {

Complex rng::gaussian(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  const std::uint64_t h = hash(seed, keys);
  const double u1 = uniform(h);
  const double u2 = uniform(splitmix(h));
  const double radius = std::sqrt(-std::log(u1));  // E|z|^2 = 1
  const double angle = 2.0 * M_PI * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::RapidDecay: return "RapidDecay";
    case GrowthClass::SquareSummable: return "SquareSummable";
    case GrowthClass::Tempered: return "Tempered";
    case GrowthClass::Wild: return "Wild";
    case GrowthClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

GrowthClass growth_class_from_string(const std::string& s) {
  for (auto c : {GrowthClass::RapidDecay, GrowthClass::SquareSummable, GrowthClass::Tempered,
                 GrowthClass::Wild, GrowthClass::Inconclusive}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown growth class '" + s + "'");
}

// ---------------------------------------------------------------------------
// Envelopes

double EnvelopeClass::bound(std::span<const std::size_t> m) const {
  if (constant == 0.0) return 0.0;
  if (diagonal) {
    if (m.size() != 2) throw std::invalid_argument("diagonal envelope needs a 2-axis index");
    if (m[0] != m[1]) return 0.0;
    const double x = static_cast<double>(m[0]);
    return constant * std::pow(1.0 + x, poly[0]) * std::exp(-exp_rate[0] * x);
  }
  if (m.size() != poly.size()) throw std::invalid_argument("envelope/index axis mismatch");
  double b = constant;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = static_cast<double>(m[i]);
    b *= std::pow(1.0 + x, poly[i]) * std::exp(-exp_rate[i] * x);
  }
  return b;
}

EnvelopeClass EnvelopeClass::uniform(std::vector<double> poly, double rate, double constant) {
  EnvelopeClass e;
  e.exp_rate.assign(poly.size(), rate);
  e.poly = std::move(poly);
  e.constant = constant;
  return e;
}

namespace {

GrowthClass axis_growth(double p, double r) {
  if (r > 0) return GrowthClass::RapidDecay;
  if (r < 0) return GrowthClass::Wild;
  return p < -0.5 ? GrowthClass::SquareSummable : GrowthClass::Tempered;
}

}  // namespace

GrowthClass envelope_growth(const EnvelopeClass& e) {
  if (e.constant == 0.0) return GrowthClass::RapidDecay;
  if (e.diagonal) return axis_growth(e.poly[0], e.exp_rate[0]);
  // Separable bound: the set is the tensor product of per-axis sets.
  GrowthClass c = GrowthClass::RapidDecay;
  for (std::size_t i = 0; i < e.poly.size(); ++i) c = worst(c, axis_growth(e.poly[i], e.exp_rate[i]));
  return c;
}

EnvelopeClass envelope_pointwise_product(const EnvelopeClass& a, const EnvelopeClass& b) {
  if (a.diagonal != b.diagonal || a.poly.size() != b.poly.size())
    throw std::invalid_argument("pointwise envelope product needs matching structure");
  EnvelopeClass out = a;
  for (std::size_t i = 0; i < a.poly.size(); ++i) {
    out.poly[i] += b.poly[i];
    out.exp_rate[i] += b.exp_rate[i];
  }
  out.constant = a.constant * b.constant;
  return out;
}

std::optional<double> power_exp_series(double p, double r) {
  if (r < 0) return std::nullopt;
  if (r == 0) {
    if (p >= -1.0) return std::nullopt;
    // sum_{k>=0} (1+k)^p = zeta(-p)
    return std::riemann_zeta(-p) * (1.0 + 1e-14);
  }
  double sum = 0.0;
  const double peak = p > 0 ? p / r : 0.0;
  constexpr std::size_t kMaxTerms = 20'000'000;
  for (std::size_t k = 0; k < kMaxTerms; ++k) {
    const double x = static_cast<double>(k);
    const double term = std::exp(p * std::log1p(x) - r * x);
    sum += term;
    if (x + 1.0 <= peak) continue;
    // Past the peak the term ratio ((k+2)/(k+1))^p e^{-r} is nonincreasing.
    const double ratio = std::exp(p * std::log((x + 2.0) / (x + 1.0)) - r);
    if (ratio >= 1.0) continue;
    const double tail = term * ratio / (1.0 - ratio);
    if (tail <= 1e-16 * sum || k + 1 == kMaxTerms) return sum + tail;
  }
  return sum;
}

std::optional<EnvelopeClass> envelope_matrix_product(const EnvelopeClass& a, const EnvelopeClass& b) {
  if (a.axes() != 2 || b.axes() != 2) throw std::invalid_argument("matrix envelope product needs 2-axis envelopes");
  if (a.constant == 0.0 || b.constant == 0.0) return EnvelopeClass::uniform({0.0, 0.0}, 0.0, 0.0);
  if (a.diagonal && b.diagonal) {
    auto out = envelope_pointwise_product(a, b);
    return out;
  }
  EnvelopeClass out;
  out.poly.resize(2);
  out.exp_rate.resize(2);
  out.constant = a.constant * b.constant;
  if (a.diagonal) {
    out.poly = {a.poly[0] + b.poly[0], b.poly[1]};
    out.exp_rate = {a.exp_rate[0] + b.exp_rate[0], b.exp_rate[1]};
    return out;
  }
  if (b.diagonal) {
    out.poly = {a.poly[0], a.poly[1] + b.poly[0]};
    out.exp_rate = {a.exp_rate[0], a.exp_rate[1] + b.exp_rate[0]};
    return out;
  }
  // sum_k |a_mk||b_kn| <= Ca Cb row(m) col(n) sum_k (1+k)^{pa1+pb0} e^{-(ra1+rb0)k}
  auto s = power_exp_series(a.poly[1] + b.poly[0], a.exp_rate[1] + b.exp_rate[0]);
  if (!s) return std::nullopt;
  out.poly = {a.poly[0], b.poly[1]};
  out.exp_rate = {a.exp_rate[0], b.exp_rate[1]};
  out.constant *= *s;
  return out;
}

EnvelopeClass envelope_transpose(const EnvelopeClass& e) {
  if (e.diagonal) return e;
  if (e.poly.size() != 2) throw std::invalid_argument("transpose needs a 2-axis envelope");
  EnvelopeClass out = e;
  std::swap(out.poly[0], out.poly[1]);
  std::swap(out.exp_rate[0], out.exp_rate[1]);
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Complex atom_coef(const Atom& a) {
  return std::visit([](const auto& x) { return x.coef; }, a);
}

Atom atom_scaled(Atom a, Complex c) {
  std::visit([c](auto& x) { x.coef *= c; }, a);
  return a;
}

Atom atom_conj(Atom a) {
  std::visit([](auto& x) { x.coef = std::conj(x.coef); }, a);
  return a;
}

Atom atom_pointwise(const Atom& a, const Atom& b) {
  if (atom_axes(a) != atom_axes(b)) throw std::invalid_argument("pointwise product of atoms with different axes");
  if (auto* k = std::get_if<Kronecker>(&a)) return Kronecker{k->coef * evaluate(b, k->index), k->index};
  if (auto* k = std::get_if<Kronecker>(&b)) return Kronecker{k->coef * evaluate(a, k->index), k->index};
  const auto& x = std::get<Monomial>(a);
  const auto& y = std::get<Monomial>(b);
  Monomial out{x.coef * y.coef, x.exponents, x.rate + y.rate};
  for (std::size_t i = 0; i < out.exponents.size(); ++i) out.exponents[i] += y.exponents[i];
  return out;
}

// sum_k conj(v_k) u_k over all k >= 0, for 1-axis atoms.
std::optional<Complex> atom_inner(const Atom& u, const Atom& v) {
  if (auto* k = std::get_if<Kronecker>(&v)) return std::conj(k->coef) * evaluate(u, k->index);
  if (auto* k = std::get_if<Kronecker>(&u)) return std::conj(evaluate(v, k->index)) * k->coef;
  const auto& x = std::get<Monomial>(u);
  const auto& y = std::get<Monomial>(v);
  if (x.coef == 0.0 || y.coef == 0.0) return Complex{0.0};
  auto s = power_exp_series(x.exponents[0] + y.exponents[0], x.rate + y.rate);
  if (!s) return std::nullopt;
  return std::conj(y.coef) * x.coef * *s;
}

GrowthClass atom_growth(const Atom& a) {
  return std::visit(overloaded{[](const Monomial& m) {
                                 if (m.coef == 0.0 || m.rate > 0) return GrowthClass::RapidDecay;
                                 if (m.rate < 0) return GrowthClass::Wild;
                                 for (double p : m.exponents)
                                   if (p >= -0.5) return GrowthClass::Tempered;
                                 return GrowthClass::SquareSummable;
                               },
                               [](const Kronecker&) { return GrowthClass::RapidDecay; }},
                    a);
}

// 2-axis generators as either Outer or Diagonal.
using MatrixForm = std::variant<Outer, Diagonal>;

MatrixForm matrix_form(const Generator& g) {
  return std::visit(
      overloaded{[](const Monomial& m) -> MatrixForm {
                   if (m.exponents.size() != 2) throw std::invalid_argument("matrix product needs 2-axis generators");
                   return Outer{Monomial{m.coef, {m.exponents[0]}, m.rate}, Monomial{1.0, {m.exponents[1]}, m.rate}};
                 },
                 [](const Kronecker& k) -> MatrixForm {
                   if (k.index.size() != 2) throw std::invalid_argument("matrix product needs 2-axis generators");
                   return Outer{Kronecker{k.coef, {k.index[0]}}, Kronecker{1.0, {k.index[1]}}};
                 },
                 [](const Outer& o) -> MatrixForm { return o; },
                 [](const Diagonal& d) -> MatrixForm { return d; }},
      g);
}

std::string describe_atom(const Atom& a, const char* var) {
  std::ostringstream os;
  std::visit(overloaded{[&](const Monomial& m) {
                          if (m.coef != Complex{1.0}) os << "(" << m.coef.real() << (m.coef.imag() < 0 ? "" : "+")
                                                         << m.coef.imag() << "i)*";
                          bool any = false;
                          for (std::size_t i = 0; i < m.exponents.size(); ++i) {
                            if (m.exponents[i] == 0.0) continue;
                            os << (any ? "*" : "") << "(1+" << var << i << ")^" << m.exponents[i];
                            any = true;
                          }
                          if (m.rate != 0.0) {
                            os << (any ? "*" : "") << "exp(-" << m.rate << "*|" << var << "|)";
                            any = true;
                          }
                          if (!any) os << "1";
                        },
                        [&](const Kronecker& k) {
                          if (k.coef != Complex{1.0}) os << "(" << k.coef.real() << (k.coef.imag() < 0 ? "" : "+")
                                                         << k.coef.imag() << "i)*";
                          os << "delta_";
                          for (std::size_t i = 0; i < k.index.size(); ++i) os << (i ? "," : "") << k.index[i];
                        }},
             a);
  return os.str();
}

}  // namespace

std::size_t atom_axes(const Atom& a) {
  return std::visit(overloaded{[](const Monomial& m) { return m.exponents.size(); },
                               [](const Kronecker& k) { return k.index.size(); }},
                    a);
}

std::size_t generator_axes(const Generator& g) {
  return std::visit(overloaded{[](const Monomial& m) { return m.exponents.size(); },
                               [](const Kronecker& k) { return k.index.size(); },
                               [](const Outer&) { return std::size_t{2}; },
                               [](const Diagonal&) { return std::size_t{2}; }},
                    g);
}

Complex evaluate(const Atom& a, std::span<const std::size_t> m) {
  return std::visit(overloaded{[&](const Monomial& x) -> Complex {
                                 if (m.size() != x.exponents.size()) throw std::invalid_argument("index/axes mismatch");
                                 double v = 1.0;
                                 double total = 0.0;
                                 for (std::size_t i = 0; i < m.size(); ++i) {
                                   const double mi = static_cast<double>(m[i]);
                                   if (x.exponents[i] != 0.0) v *= std::pow(1.0 + mi, x.exponents[i]);
                                   total += mi;
                                 }
                                 if (x.rate != 0.0) v *= std::exp(-x.rate * total);
                                 return x.coef * v;
                               },
                               [&](const Kronecker& k) -> Complex {
                                 if (m.size() != k.index.size()) throw std::invalid_argument("index/axes mismatch");
                                 for (std::size_t i = 0; i < m.size(); ++i)
                                   if (m[i] != k.index[i]) return 0.0;
                                 return k.coef;
                               }},
                    a);
}

Complex evaluate(const Generator& g, std::span<const std::size_t> m) {
  return std::visit(overloaded{[&](const Monomial& x) { return evaluate(Atom{x}, m); },
                               [&](const Kronecker& x) { return evaluate(Atom{x}, m); },
                               [&](const Outer& o) -> Complex {
                                 if (m.size() != 2) throw std::invalid_argument("index/axes mismatch");
                                 return evaluate(o.left, m.subspan(0, 1)) * std::conj(evaluate(o.right, m.subspan(1, 1)));
                               },
                               [&](const Diagonal& d) -> Complex {
                                 if (m.size() != 2) throw std::invalid_argument("index/axes mismatch");
                                 return m[0] == m[1] ? evaluate(d.entry, m.subspan(0, 1)) : Complex{0.0};
                               }},
                    g);
}

EnvelopeClass envelope_of(const Atom& a) {
  return std::visit(overloaded{[](const Monomial& m) {
                                 return EnvelopeClass::uniform(m.exponents, m.rate, std::abs(m.coef));
                               },
                               [](const Kronecker& k) {
                                 // Finite support: certify with unit rate.
                                 double shift = 0.0;
                                 for (auto j : k.index) shift += static_cast<double>(j);
                                 return EnvelopeClass::uniform(std::vector<double>(k.index.size(), 0.0), 1.0,
                                                               std::abs(k.coef) * std::exp(shift));
                               }},
                    a);
}

EnvelopeClass envelope_of(const Generator& g) {
  return std::visit(overloaded{[](const Monomial& x) { return envelope_of(Atom{x}); },
                               [](const Kronecker& x) { return envelope_of(Atom{x}); },
                               [](const Outer& o) {
                                 const auto l = envelope_of(o.left);
                                 const auto r = envelope_of(o.right);
                                 EnvelopeClass e;
                                 e.poly = {l.poly[0], r.poly[0]};
                                 e.exp_rate = {l.exp_rate[0], r.exp_rate[0]};
                                 e.constant = l.constant * r.constant;
                                 return e;
                               },
                               [](const Diagonal& d) {
                                 auto e = envelope_of(d.entry);
                                 e.diagonal = true;
                                 return e;
                               }},
                    g);
}

GrowthClass generator_growth(const Generator& g) {
  return std::visit(overloaded{[](const Monomial& x) { return atom_growth(x); },
                               [](const Kronecker& x) { return atom_growth(x); },
                               [](const Outer& o) {
                                 if (atom_coef(o.left) == 0.0 || atom_coef(o.right) == 0.0)
                                   return GrowthClass::RapidDecay;
                                 return worst(atom_growth(o.left), atom_growth(o.right));
                               },
                               [](const Diagonal& d) { return atom_growth(d.entry); }},
                    g);
}

std::string describe(const Generator& g) {
  return std::visit(overloaded{[](const Monomial& x) { return describe_atom(x, "m"); },
                               [](const Kronecker& x) { return describe_atom(x, "m"); },
                               [](const Outer& o) {
                                 return "|" + describe_atom(o.left, "m") + "><" + describe_atom(o.right, "n") + "|";
                               },
                               [](const Diagonal& d) { return "diag(" + describe_atom(d.entry, "m") + ")"; }},
                    g);
}

namespace gen {
Atom power(double p, Complex c) { return Monomial{c, {p}, 0.0}; }
Atom exponential(double rate, Complex c) { return Monomial{c, {0.0}, rate}; }
Atom delta(std::size_t j, Complex c) { return Kronecker{c, {j}}; }
Generator seq(Atom a) {
  return std::visit([](auto&& x) -> Generator { return x; }, std::move(a));
}
Generator diag(Atom a) { return Diagonal{std::move(a)}; }
Generator outer(Atom left, Atom right) { return Outer{std::move(left), std::move(right)}; }
Generator identity() { return Diagonal{power(0.0)}; }
Generator matrix_unit(std::size_t j, std::size_t k, Complex c) { return Kronecker{c, {j, k}}; }
Generator full_power(double p, double q, Complex c) { return Monomial{c, {p, q}, 0.0}; }
Generator full_exponential(double rate, Complex c) { return Monomial{c, {0.0, 0.0}, rate}; }
}  // namespace gen

std::optional<Generator> catalog_product(const Generator& f, const Generator& g, bool matrix) {
  if (generator_axes(f) != generator_axes(g)) throw std::invalid_argument("catalog product: axes mismatch");
  if (!matrix) {
    // Pointwise. Atoms multiply directly; 2-axis structures go through Outer/Diagonal.
    const auto* fa = std::get_if<Monomial>(&f);
    const auto* fk = std::get_if<Kronecker>(&f);
    const auto* ga = std::get_if<Monomial>(&g);
    const auto* gk = std::get_if<Kronecker>(&g);
    if ((fa || fk) && (ga || gk)) {
      Atom a = fa ? Atom{*fa} : Atom{*fk};
      Atom b = ga ? Atom{*ga} : Atom{*gk};
      return gen::seq(atom_pointwise(a, b));
    }
    const auto ff = matrix_form(f);
    const auto gf = matrix_form(g);
    auto diag_atom = [](const MatrixForm& x) -> Atom {
      if (auto* d = std::get_if<Diagonal>(&x)) return d->entry;
      const auto& o = std::get<Outer>(x);
      return atom_pointwise(o.left, atom_conj(o.right));
    };
    if (std::holds_alternative<Diagonal>(ff) || std::holds_alternative<Diagonal>(gf))
      return gen::diag(atom_pointwise(diag_atom(ff), diag_atom(gf)));
    const auto& a = std::get<Outer>(ff);
    const auto& b = std::get<Outer>(gf);
    return gen::outer(atom_pointwise(a.left, b.left), atom_pointwise(a.right, b.right));
  }

  const auto ff = matrix_form(f);
  const auto gf = matrix_form(g);
  if (auto* a = std::get_if<Diagonal>(&ff)) {
    if (auto* b = std::get_if<Diagonal>(&gf)) return gen::diag(atom_pointwise(a->entry, b->entry));
    const auto& o = std::get<Outer>(gf);
    return gen::outer(atom_pointwise(a->entry, o.left), o.right);
  }
  const auto& a = std::get<Outer>(ff);
  if (auto* b = std::get_if<Diagonal>(&gf)) {
    // |u><v| D = |u><D^* v|
    return gen::outer(a.left, atom_pointwise(atom_conj(b->entry), a.right));
  }
  const auto& b = std::get<Outer>(gf);
  // |u1><v1| |u2><v2| = <u2, v1> |u1><v2|
  auto s = atom_inner(b.left, a.right);
  if (!s) return std::nullopt;
  return gen::outer(atom_scaled(a.left, *s), b.right);
}

Generator catalog_involution(const Generator& f, bool matrix) {
  if (!matrix) {
    return std::visit(overloaded{[](const Monomial& x) -> Generator { return std::get<Monomial>(atom_conj(x)); },
                                 [](const Kronecker& x) -> Generator { return std::get<Kronecker>(atom_conj(x)); },
                                 [](const Outer& o) -> Generator { return Outer{atom_conj(o.left), atom_conj(o.right)}; },
                                 [](const Diagonal& d) -> Generator { return Diagonal{atom_conj(d.entry)}; }},
                      f);
  }
  if (auto* k = std::get_if<Kronecker>(&f)) {
    if (k->index.size() != 2) throw std::invalid_argument("adjoint needs a 2-axis generator");
    return Kronecker{std::conj(k->coef), {k->index[1], k->index[0]}};
  }
  const auto form = matrix_form(f);
  if (auto* d = std::get_if<Diagonal>(&form)) return Diagonal{atom_conj(d->entry)};
  const auto& o = std::get<Outer>(form);
  return Outer{o.right, o.left};
}

}  // namespace fhlab
