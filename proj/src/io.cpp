#include "fhlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fhlab::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw FormatError(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(field + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError(field, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw FormatError(field, "expected a nonnegative integer");
  const auto v = j.get<long long>();
  if (v < 0) throw FormatError(field, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

MultiIndex indices(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array of integers");
  MultiIndex out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(count(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Complex optional_coef(const Json& j, const std::string& field) {
  auto it = j.find("coef");
  return it == j.end() ? Complex{1.0} : complex_from_json(*it, field + ".coef");
}

Json atom_to_json(const Atom& a) {
  return std::visit([](const auto& x) { return generator_to_json(Generator{x}); }, a);
}

Atom atom_from_json(const Json& j, const std::string& field) {
  const auto g = generator_from_json(j, field);
  if (generator_axes(g) != 1) throw FormatError(field, "outer/diagonal factors must be 1-axis");
  if (auto* m = std::get_if<Monomial>(&g)) return *m;
  if (auto* k = std::get_if<Kronecker>(&g)) return *k;
  throw FormatError(field + ".kind", "outer/diagonal factors must be power, exponential or kronecker");
}

}  // namespace

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(field, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json generator_to_json(const Generator& g) {
  return std::visit(
      overloaded{[](const Monomial& m) {
                   Json j;
                   const bool pure_exp = m.rate != 0.0 && std::all_of(m.exponents.begin(), m.exponents.end(),
                                                                       [](double p) { return p == 0.0; });
                   if (pure_exp) {
                     j["kind"] = "exponential";
                     j["axes"] = m.exponents.size();
                     j["rate"] = m.rate;
                   } else {
                     j["kind"] = "power";
                     j["exponents"] = m.exponents;
                     if (m.rate != 0.0) j["rate"] = m.rate;
                   }
                   j["coef"] = complex_to_json(m.coef);
                   return j;
                 },
                 [](const Kronecker& k) {
                   Json j;
                   j["kind"] = "kronecker";
                   j["index"] = k.index;
                   j["coef"] = complex_to_json(k.coef);
                   return j;
                 },
                 [](const Outer& o) {
                   Json j;
                   j["kind"] = "outer";
                   j["left"] = atom_to_json(o.left);
                   j["right"] = atom_to_json(o.right);
                   return j;
                 },
                 [](const Diagonal& d) {
                   Json j;
                   j["kind"] = "diagonal";
                   j["entry"] = atom_to_json(d.entry);
                   return j;
                 }},
      g);
}

Generator generator_from_json(const Json& j, const std::string& field) {
  const auto& kind_j = require(j, "kind", field);
  if (!kind_j.is_string()) throw FormatError(field + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "power") {
    Monomial m;
    m.coef = optional_coef(j, field);
    m.exponents = numbers(require(j, "exponents", field), field + ".exponents");
    if (m.exponents.empty() || m.exponents.size() > 2) throw FormatError(field + ".exponents", "expected 1 or 2 entries");
    if (j.contains("rate")) m.rate = number(j["rate"], field + ".rate");
    return m;
  }
  if (kind == "exponential") {
    Monomial m;
    m.coef = optional_coef(j, field);
    m.rate = number(require(j, "rate", field), field + ".rate");
    const std::size_t axes = j.contains("axes") ? count(j["axes"], field + ".axes") : 1;
    if (axes < 1 || axes > 2) throw FormatError(field + ".axes", "expected 1 or 2");
    m.exponents.assign(axes, 0.0);
    return m;
  }
  if (kind == "kronecker") {
    Kronecker k;
    k.coef = optional_coef(j, field);
    k.index = indices(require(j, "index", field), field + ".index");
    if (k.index.empty() || k.index.size() > 2) throw FormatError(field + ".index", "expected 1 or 2 entries");
    return k;
  }
  if (kind == "outer")
    return Outer{atom_from_json(require(j, "left", field), field + ".left"),
                 atom_from_json(require(j, "right", field), field + ".right")};
  if (kind == "diagonal") return Diagonal{atom_from_json(require(j, "entry", field), field + ".entry")};
  throw FormatError(field + ".kind", "unknown generator kind '" + kind + "'");
}

Json envelope_to_json(const EnvelopeClass& e) {
  Json j;
  j["poly"] = e.poly;
  j["exp_rate"] = e.exp_rate;
  j["constant"] = e.constant;
  if (e.diagonal) j["support"] = "diagonal";
  return j;
}

EnvelopeClass envelope_from_json(const Json& j, std::size_t axes, const std::string& field) {
  EnvelopeClass e;
  auto it = j.find("support");
  if (it != j.end()) {
    if (!it->is_string() || (*it != "diagonal" && *it != "full"))
      throw FormatError(field + ".support", "expected \"diagonal\" or \"full\"");
    e.diagonal = *it == "diagonal";
    if (e.diagonal && axes != 2) throw FormatError(field + ".support", "diagonal support needs 2 axes");
  }
  const std::size_t entries = e.diagonal ? 1 : axes;
  e.poly = numbers(require(j, "poly", field), field + ".poly");
  if (e.poly.size() != entries)
    throw FormatError(field + ".poly", "expected " + std::to_string(entries) + " exponents");
  const auto& rate = require(j, "exp_rate", field);
  if (rate.is_number()) {
    e.exp_rate.assign(entries, rate.get<double>());
  } else {
    e.exp_rate = numbers(rate, field + ".exp_rate");
    if (e.exp_rate.size() != entries)
      throw FormatError(field + ".exp_rate", "expected a number or " + std::to_string(entries) + " rates");
  }
  e.constant = number(require(j, "constant", field), field + ".constant");
  if (!(e.constant >= 0)) throw FormatError(field + ".constant", "must be nonnegative");
  return e;
}

Json element_to_json(const GradedElement& a) {
  Json j;
  j["axes"] = a.axes();
  j["trunc"] = a.trunc();
  Json c = Json::array();
  for (auto x : a.coeffs()) c.push_back(complex_to_json(x));
  j["coeffs"] = std::move(c);
  j["generator"] = a.generator() ? generator_to_json(*a.generator()) : Json(nullptr);
  j["envelope"] = a.envelope() ? envelope_to_json(*a.envelope()) : Json(nullptr);
  return j;
}

GradedElement element_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("element", "expected an object");
  const std::size_t axes = count(require(j, "axes", "element"), "axes");
  if (axes < 1 || axes > 2) throw FormatError("axes", "expected 1 or 2");
  const auto trunc = indices(require(j, "trunc", "element"), "trunc");
  if (trunc.size() != axes) throw FormatError("trunc", "expected " + std::to_string(axes) + " entries");
  for (auto d : trunc)
    if (d < 1) throw FormatError("trunc", "every entry must be at least 1");

  std::optional<Generator> generator;
  if (auto it = j.find("generator"); it != j.end() && !it->is_null()) {
    generator = generator_from_json(*it, "generator");
    if (generator_axes(*generator) != axes) throw FormatError("generator", "axes do not match the element");
  }
  std::optional<EnvelopeClass> envelope;
  if (auto it = j.find("envelope"); it != j.end() && !it->is_null()) envelope = envelope_from_json(*it, axes, "envelope");

  auto blame = [](const std::invalid_argument& e) {
    const std::string what = e.what();
    const char* field = what.find("envelope") != std::string::npos    ? "envelope"
                        : what.find("generator") != std::string::npos ? "generator"
                                                                        : "coeffs";
    return FormatError(field, what);
  };
  auto it = j.find("coeffs");
  if (it == j.end() || it->is_null()) {
    if (!generator) throw FormatError("coeffs", "missing (and no generator to materialize)");
    try {
      auto a = GradedElement::from_generator(*generator, trunc);
      return envelope ? a.with_envelope(envelope) : a;
    } catch (const std::invalid_argument& e) {
      throw blame(e);
    }
  }
  if (!it->is_array()) throw FormatError("coeffs", "expected an array of [re, im] pairs");
  std::vector<Complex> coeffs;
  coeffs.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i)
    coeffs.push_back(complex_from_json((*it)[i], "coeffs[" + std::to_string(i) + "]"));
  try {
    return GradedElement(trunc, std::move(coeffs), envelope, generator);
  } catch (const std::invalid_argument& e) {
    throw blame(e);
  }
}

Json family_to_json(const OperatorFamily& fam) {
  Json j;
  j["d"] = fam.d;
  Json points = Json::array();
  for (std::size_t s = 0; s < fam.size(); ++s) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < fam.matrices[s].rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < fam.matrices[s].cols(); ++c) row.push_back(complex_to_json(fam.matrices[s](r, c)));
      rows.push_back(std::move(row));
    }
    points.push_back(Json{{"weight", fam.weights[s]}, {"matrix", std::move(rows)}});
  }
  j["points"] = std::move(points);
  j["label"] = fam.label;
  return j;
}

OperatorFamily family_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("family", "expected an object");
  OperatorFamily fam;
  fam.d = count(require(j, "d", "family"), "d");
  if (fam.d < 1) throw FormatError("d", "must be at least 1");
  const auto& points = require(j, "points", "family");
  if (!points.is_array() || points.empty()) throw FormatError("points", "expected a nonempty array");
  const auto d = static_cast<Eigen::Index>(fam.d);
  for (std::size_t s = 0; s < points.size(); ++s) {
    const std::string field = "points[" + std::to_string(s) + "]";
    const double w = number(require(points[s], "weight", field), field + ".weight");
    if (!(w > 0)) throw FormatError(field + ".weight", "must be positive");
    const auto& m = require(points[s], "matrix", field);
    const std::string mf = field + ".matrix";
    if (!m.is_array()) throw FormatError(mf, "expected an array");
    CMatrix t(d, d);
    // d rows of d [re, im] pairs, or a flat row-major list of d*d pairs
    const bool nested = !m.empty() && m[0].is_array() && !m[0].empty() && m[0][0].is_array();
    if (nested && m.size() != fam.d) throw FormatError(mf, "expected " + std::to_string(fam.d) + " rows");
    if (nested) {
      for (Eigen::Index r = 0; r < d; ++r) {
        const auto& row = m[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != fam.d)
          throw FormatError(mf + "[" + std::to_string(r) + "]", "expected " + std::to_string(fam.d) + " entries");
      }
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          t(r, c) = complex_from_json(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                      mf + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    } else if (m.size() == fam.d * fam.d) {
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
          const auto k = static_cast<std::size_t>(r * d + c);
          t(r, c) = complex_from_json(m[k], mf + "[" + std::to_string(k) + "]");
        }
    } else {
      throw FormatError(mf, "expected d rows of d entries or d*d row-major entries");
    }
    fam.weights.push_back(w);
    fam.matrices.push_back(std::move(t));
  }
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) throw FormatError("label", "expected a string");
    fam.label = it->get<std::string>();
  }
  return fam;
}

// ---------------------------------------------------------------------------

Json to_json(const AxiomReport& r) {
  Json j;
  j["model"] = r.model;
  j["mutation"] = r.mutation;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["tol"] = r.tol;
  j["status"] = r.all_pass() ? "pass" : "fail";
  Json axioms = Json::array();
  for (const auto& a : r.axioms) {
    Json x;
    x["axiom"] = a.axiom;
    x["status"] = a.pass ? "pass" : "fail";
    x["residual"] = a.residual;
    x["witness_refs"] = a.witness;
    x["seed"] = r.seed;
    x["detail"] = a.detail;
    axioms.push_back(std::move(x));
  }
  j["axioms"] = std::move(axioms);
  return j;
}

Json to_json(const MembershipVerdict& v) {
  Json j;
  j["side"] = to_string(v.side);
  j["verdict"] = to_string(v.verdict);
  j["method"] = v.method;
  j["certificate"] = v.certificate;
  if (v.witness) {
    j["witness"] = Json{{"description", describe(*v.witness)}, {"generator", generator_to_json(*v.witness)}};
    if (v.witness_product_class) j["witness"]["product_class"] = to_string(*v.witness_product_class);
  } else {
    j["witness"] = nullptr;
  }
  j["ladder"] = v.ladder;
  j["residuals"] = v.residuals;
  return j;
}

Json to_json(const BoundedVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["constant"] = v.constant;
  j["certified_bound"] = v.certified_bound ? Json(*v.certified_bound) : Json(nullptr);
  j["norms"] = v.norms;
  j["ladder"] = v.ladder;
  return j;
}

Json to_json(const TightnessReport& r) {
  Json j;
  j["status"] = r.pass ? "pass" : "fail";
  j["frobenius_residual"] = r.frobenius_residual;
  j["sampled_residual"] = r.sampled_residual;
  j["samples"] = r.samples;
  j["detail"] = r.detail;
  return j;
}

Json to_json(const RepresentationReport& r) {
  Json j;
  j["status"] = r.pass ? "pass" : "fail";
  j["ladder"] = r.ladder;
  j["multipliers"] = r.multipliers;
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    levels.push_back(Json{{"n", l.n},
                          {"cases", l.cases},
                          {"rapid_decay", l.rapid},
                          {"left_members", l.left_members},
                          {"right_members", l.right_members},
                          {"inconclusive", l.inconclusive},
                          {"max_residual", l.max_residual},
                          {"max_envelope_excess", l.max_envelope_excess}});
  }
  j["levels"] = std::move(levels);
  return j;
}

// ---------------------------------------------------------------------------

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path, e.what());
  }
}

GradedElement read_element(const std::string& path) { return element_from_json(read_json_file(path)); }

OperatorFamily read_family(const std::string& path) { return family_from_json(read_json_file(path)); }

}  // namespace fhlab::io
