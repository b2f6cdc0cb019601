#include "fhlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace fhlab {

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"axioms", "extend", "moyal-check", "quantize", "representation"};
  return names;
}

bool ScenarioResult::pass() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

namespace {

using io::Json;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw UsageError(what + ": expected a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

Assertion at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value <= limit};
}

Assertion holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, ok}; }

Mutation parse_mutations(const std::vector<std::string>& specs) {
  Mutation m;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--mutate expects key=value, got '" + s + "'");
    try {
      m.apply(s.substr(0, eq), s.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--mutate: ") + e.what());
    }
  }
  return m;
}

std::unique_ptr<AlgebraModel> make_model(const ScenarioConfig& c, std::size_t default_pointwise,
                                         std::size_t default_matrix) {
  const Mutation mutation = parse_mutations(c.mutations);
  if (c.model == "pointwise") return std::make_unique<PointwiseModel>(c.dim.value_or(default_pointwise), mutation);
  if (c.model == "matrix") return std::make_unique<MatrixModel>(c.dim.value_or(default_matrix), mutation);
  if (c.model == "transported") {
    if (mutation.any()) throw UsageError("--mutate is not available for the transported model");
    try {
      return std::make_unique<TransportedModel>(parse_family_spec(c.family), c.tol);
    } catch (const Rejected& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown model '" + c.model + "' (expected pointwise, matrix or transported)");
}

Json config_json(const ScenarioConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["model"] = c.model;
  j["family"] = c.family;
  j["dim"] = c.dim ? Json(*c.dim) : Json(nullptr);
  j["ladder"] = c.ladder;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["mutations"] = c.mutations;
  j["samples"] = c.samples ? Json(*c.samples) : Json(nullptr);
  j["element"] = c.element;
  return j;
}

GradedElement load_element(const ScenarioConfig& c) {
  if (c.element.empty()) throw UsageError("--element is required here");
  if (!std::filesystem::exists(c.element)) throw UsageError("element file '" + c.element + "' does not exist");
  return io::read_element(c.element);
}

double max_abs_diff(const GradedElement& a, const GradedElement& b) {
  if (!a.same_shape(b)) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

ScenarioResult run_axioms(const ScenarioConfig& c) {
  const auto model = make_model(c, 64, 16);
  const CorpusSpec corpus{c.seed, c.samples.value_or(200)};
  auto report = check_hilbert_axioms(*model, corpus, c.tol);
  report.mutation = parse_mutations(c.mutations).describe();

  ScenarioResult r;
  r.report["axiom_report"] = io::to_json(report);
  Json witnesses = Json::array();
  for (const auto& a : report.axioms) {
    r.assertions.push_back(holds(a.axiom, a.pass));
    if (a.pass || a.witness.empty() || a.axiom == "totality") continue;
    // Re-evaluate the witness triple.
    const auto t = corpus_triple(*model, corpus, a.witness.front());
    const double again = a.axiom == "involution_adjoint"  ? involution_adjoint_residual(*model, t.f, t.g)
                         : a.axiom == "product_adjoint" ? product_adjoint_residual(*model, t.f, t.g, t.h)
                                                        : a.residual;
    witnesses.push_back(Json{{"axiom", a.axiom},
                             {"triple", a.witness.front()},
                             {"residual", again},
                             {"above_tolerance", again > c.tol}});
  }
  r.report["witness_replay"] = std::move(witnesses);
  return r;
}

ScenarioResult run_extend(const ScenarioConfig& c) {
  const auto model = make_model(c, 64, 16);
  if (model->kind() == ModelKind::Transported) throw UsageError("extend runs on the pointwise or matrix model");
  const std::size_t samples = c.samples.value_or(200);
  const std::size_t triples = std::min<std::size_t>(samples, 50);
  const auto shape = model->shape();
  std::optional<GradedElement> given;
  if (!c.element.empty()) {
    given = load_element(c);
    if (given->trunc() != shape) throw UsageError("element shape does not match the model");
  }

  double agree = 0.0, invol_twice = 0.0, assoc = 0.0, antihom = 0.0, moyal_assoc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto f = model->sample(c.seed, 2 * i);
    const auto g = model->sample(c.seed, 2 * i + 1);
    const double scale = 1.0 + model->norm(f) * model->norm(g);
    agree = std::max(agree, max_abs_diff(extend_product_right(f, g, *model), model->product(f, g)) / scale);
    agree = std::max(agree, max_abs_diff(extend_product_left(g, f, *model), model->product(g, f)) / scale);
    agree = std::max(agree, max_abs_diff(extend_involution(f, *model), model->involution(f)) / (1.0 + model->norm(f)));
  }

  const auto ladder = default_ladder(model->sample(c.seed, 0));
  for (std::size_t i = 0; i < triples; ++i) {
    const auto t = given ? *given : random_tempered(shape, c.seed ^ 0x7e3, i, 2.0);
    const auto g = model->sample(c.seed ^ 0xa5, 2 * i);
    const auto h = model->sample(c.seed ^ 0xa5, 2 * i + 1);
    const double scale = 1.0 + model->norm(t) * model->norm(g) * model->norm(h);
    auto rel = [scale](const GradedElement& a, const GradedElement& b) { return max_abs_diff(a, b) / scale; };

    // t # (g # h) = (t # g) # h
    assoc = std::max(assoc, rel(extend_product_right(t, model->product(g, h), *model),
                                extend_product_right(extend_product_right(t, g, *model), h, *model)));
    // h # (g # t) = (h # g) # t
    assoc = std::max(assoc, rel(extend_product_left(h, extend_product_left(g, t, *model), *model),
                                extend_product_left(model->product(h, g), t, *model)));
    // (g # t) # h = g # (t # h)
    assoc = std::max(assoc, rel(extend_product_right(extend_product_left(g, t, *model), h, *model),
                                extend_product_left(g, extend_product_right(t, h, *model), *model)));

    const auto t_star = extend_involution(t, *model);
    const double scale2 = 1.0 + model->norm(t) * model->norm(g);
    // (t # g)^# = g^# # t^#,  (g # t)^# = t^# # g^#
    antihom = std::max(antihom, max_abs_diff(extend_involution(extend_product_right(t, g, *model), *model),
                                             extend_product_left(model->involution(g), t_star, *model)) / scale2);
    antihom = std::max(antihom, max_abs_diff(extend_involution(extend_product_left(g, t, *model), *model),
                                             extend_product_right(t_star, model->involution(g), *model)) / scale2);
    invol_twice = std::max(invol_twice, max_abs_diff(extend_involution(t_star, *model), t) / (1.0 + model->norm(t)));

    // (g # t) # h = g # (t # h) with g in M_R, h in M_L
    const auto right = is_right_moyal(g, *model, ladder);
    const auto left = is_left_moyal(h, *model, ladder);
    const auto gt = moyal_extend(g, right, t, *model);
    const auto th = moyal_extend_left(t, h, left, *model);
    moyal_assoc = std::max(moyal_assoc,
                           rel(moyal_extend_left(gt, h, left, *model), moyal_extend(g, right, th, *model)));
  }

  ScenarioResult r;
  r.report["model"] = model->name();
  r.report["pairs"] = samples;
  r.report["triples"] = triples;
  r.report["residuals"] = Json{{"extension_agreement", agree},
                               {"involution_twice", invol_twice},
                               {"mixed_associativity", assoc},
                               {"anti_homomorphism", antihom},
                               {"moyal_associativity", moyal_assoc}};
  r.assertions.push_back(at_most("extension_agreement", agree, c.tol));
  r.assertions.push_back(at_most("involution_twice", invol_twice, c.tol));
  r.assertions.push_back(at_most("mixed_associativity", assoc, 1e-9));
  r.assertions.push_back(at_most("anti_homomorphism", antihom, 1e-9));
  r.assertions.push_back(at_most("moyal_associativity", moyal_assoc, 1e-9));
  return r;
}

// ---------------------------------------------------------------------------

struct Expectation {
  std::string label;
  Generator f;
  std::optional<Verdict> left, right;  // empty: rejection expected
};

// Re-checks a NonMember witness: exact product class and the numeric class of
// the materialized product.
Json replay_witness(const MembershipVerdict& v, const GradedElement& f, const AlgebraModel& model,
                    std::span<const std::size_t> ladder, bool& ok) {
  Json j;
  if (!v.witness) {
    ok = false;
    return j;
  }
  const auto g = GradedElement::from_generator(*v.witness, model.shape());
  const auto p = v.side == Side::Left ? model.product(f, g) : model.product(g, f);
  const auto numeric = classify(p.stripped(), ladder).verdict;
  j["numeric_product_class"] = to_string(numeric);
  if (f.generator()) {
    const bool matrix = f.axes() == 2;
    const auto exact = v.side == Side::Left ? catalog_product(*f.generator(), *v.witness, matrix)
                                            : catalog_product(*v.witness, *f.generator(), matrix);
    if (exact) {
      j["exact_product"] = describe(*exact);
      j["exact_product_class"] = to_string(generator_growth(*exact));
      ok = ok && !in_algebra(generator_growth(*exact));
    }
  }
  ok = ok && !in_algebra(numeric) && numeric != GrowthClass::Inconclusive;
  return j;
}

ScenarioResult run_moyal(const ScenarioConfig& c) {
  if (c.model != "pointwise" && c.model != "matrix")
    throw UsageError("moyal-check runs on the pointwise or matrix model");
  const auto model = make_model(c, 64, 32);
  const std::size_t d = model->shape().front();
  std::vector<std::size_t> ladder = c.ladder;
  if (ladder.empty())
    for (std::size_t l : {d / 4, d / 2, d})
      if (l >= 1) ladder.push_back(l);

  ScenarioResult r;
  r.report["model"] = model->name();
  r.report["ladder"] = ladder;

  if (!c.element.empty()) {
    const auto f = load_element(c);
    if (f.trunc() != model->shape()) throw UsageError("element shape does not match the model");
    Json entry;
    try {
      const auto m = moyal_membership(f, *model, ladder);
      entry["left"] = io::to_json(m.left);
      entry["right"] = io::to_json(m.right);
      entry["both"] = io::to_json(m.both());
    } catch (const Rejected& e) {
      entry["rejected"] = e.what();
    }
    r.report["element"] = std::move(entry);
    return r;
  }

  const bool matrix = model->kind() == ModelKind::Matrix;
  std::vector<Expectation> suite;
  const Generator wild = matrix ? gen::diag(Monomial{1.0, {0.0}, -std::log(2.0)}) : Generator{Monomial{1.0, {0.0}, -std::log(2.0)}};
  if (matrix) {
    suite.push_back({"identity", gen::identity(), Verdict::Member, Verdict::Member});
    for (double p : {1.0, 3.0, 5.0})
      suite.push_back({"diag((1+m)^" + num(p) + ")", gen::diag(gen::power(p)), Verdict::Member, Verdict::Member});
    const auto e0v = gen::outer(gen::delta(0), gen::power(0.0));
    suite.push_back({"e_0 v^*", e0v, Verdict::Member, Verdict::NonMember});
    suite.push_back({"v e_0^*", catalog_involution(e0v, true), Verdict::NonMember, Verdict::Member});
  } else {
    suite.push_back({"constant 1", gen::seq(gen::power(0.0)), Verdict::Member, Verdict::Member});
    for (double p : {1.0, 3.0, 5.0})
      suite.push_back({"(1+m)^" + num(p), gen::seq(gen::power(p)), Verdict::Member, Verdict::Member});
    suite.push_back({"e^{-m}", gen::seq(gen::exponential(1.0)), Verdict::Member, Verdict::Member});
  }
  suite.push_back({"2^m", wild, std::nullopt, std::nullopt});

  Json verdicts = Json::array();
  std::size_t inconclusive = 0;
  std::vector<std::pair<Verdict, Verdict>> observed;
  for (const auto& e : suite) {
    const auto f = GradedElement::from_generator(e.f, model->shape());
    Json entry;
    entry["label"] = e.label;
    entry["generator"] = describe(e.f);
    bool ok = true;
    try {
      const auto m = moyal_membership(f, *model, ladder);
      entry["left"] = io::to_json(m.left);
      entry["right"] = io::to_json(m.right);
      entry["both"] = io::to_json(m.both());
      for (const auto* v : {&m.left, &m.right})
        if (v->verdict == Verdict::Inconclusive) ++inconclusive;
      ok = e.left && m.left.verdict == *e.left && m.right.verdict == *e.right;
      for (const auto* v : {&m.left, &m.right})
        if (v->verdict == Verdict::NonMember) entry[v == &m.left ? "left_witness_replay" : "right_witness_replay"] =
                                                  replay_witness(*v, f, *model, ladder, ok);
      observed.emplace_back(m.left.verdict, m.right.verdict);
    } catch (const Rejected& ex) {
      entry["rejected"] = ex.what();
      ok = !e.left.has_value();
      observed.emplace_back(Verdict::Inconclusive, Verdict::Inconclusive);
    }
    entry["expected"] = ok ? "match" : "mismatch";
    r.assertions.push_back(holds("verdict " + e.label, ok));
    verdicts.push_back(std::move(entry));
  }
  r.report["verdicts"] = std::move(verdicts);
  r.assertions.push_back(at_most("inconclusive_verdicts", static_cast<double>(inconclusive), 0.0));

  if (matrix) {
    // adjoint swaps the sides
    const auto a = observed[4];
    const auto b = observed[5];
    r.assertions.push_back(holds("adjoint_swaps_sides", a.first == b.second && a.second == b.first));
  }

  // Bounded elements and the trace.
  Json bounded = Json::array();
  const auto shape = model->shape();
  auto bounded_case = [&](const std::string& label, const Generator& g, std::optional<double> expected) {
    Json entry{{"label", label}};
    try {
      const auto b = is_bounded_element(GradedElement::from_generator(g, shape), *model, ladder);
      entry["result"] = io::to_json(b);
      const bool ok = expected && b.verdict == Verdict::Member && std::abs(b.constant - *expected) <= c.tol;
      r.assertions.push_back(holds("bounded " + label, ok));
    } catch (const Rejected& ex) {
      entry["rejected"] = ex.what();
      r.assertions.push_back(holds("bounded " + label, !expected));
    }
    bounded.push_back(std::move(entry));
  };
  if (matrix) {
    bounded_case("E_00", gen::matrix_unit(0, 0), 1.0);
    const auto e00 = GradedElement::from_generator(gen::matrix_unit(0, 0), shape);
    const Complex tau = trace_tau_left(e00, e00, *model, ladder);
    r.report["tau_E00_E00"] = io::complex_to_json(tau);
    r.assertions.push_back(at_most("tau(E_00 E_00) - 1", std::abs(tau - 1.0), c.tol));
  } else {
    bounded_case("(1+m)^-1", gen::seq(gen::power(-1.0)), 1.0);
    bounded_case("(1+m)^-1/4", gen::seq(gen::power(-0.25)), std::nullopt);
    const auto e = GradedElement::from_generator(gen::seq(gen::exponential(1.0)), shape);
    const Complex tau = trace_tau_left(e, e, *model, ladder);
    // sum_{m<d} e^{-2m}
    const double exact = (1.0 - std::exp(-2.0 * static_cast<double>(d))) / (1.0 - std::exp(-2.0));
    r.report["tau_exp_exp"] = io::complex_to_json(tau);
    r.assertions.push_back(at_most("tau(e^{-m} e^{-m}) - geometric sum", std::abs(tau - exact), c.tol));
  }
  r.report["bounded"] = std::move(bounded);
  return r;
}

// ---------------------------------------------------------------------------

ScenarioResult run_quantize(const ScenarioConfig& c) {
  const auto fam = parse_family_spec(c.family);
  const SymbolSpace space(fam);
  const std::size_t samples = c.samples.value_or(100);
  const auto n = static_cast<Eigen::Index>(fam.size());
  const auto d = static_cast<Eigen::Index>(fam.d);

  const auto tight = verify_tightness(fam, c.tol, c.seed);
  auto random_symbol = [&](std::uint64_t tag, std::size_t i) {
    CVector f(n);
    for (Eigen::Index s = 0; s < n; ++s) f(s) = rng::gaussian(c.seed, {tag, i, static_cast<std::uint64_t>(s)});
    return f;
  };
  auto random_operator = [&](std::size_t i) {
    CMatrix t(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        t(a, b) = rng::gaussian(c.seed, {0x0b, i, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
    return t;
  };

  double parseval = 0.0, reconstruction = 0.0, isometry = 0.0, complement = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    parseval = std::max(parseval, parseval_check(random_symbol(0x0f, i), random_symbol(0x0e, i), fam).residual);
    const CMatrix t = random_operator(i);
    const CVector sym = space.phi(t);
    reconstruction = std::max(reconstruction, (space.pi(sym) - t).norm() / t.norm());
    isometry = std::max(isometry, std::abs(space.norm(sym) - t.norm()) / (1.0 + t.norm()));
    const CVector f = random_symbol(0x0c, i);
    const CVector perp = f - space.project(f).symbol;
    complement = std::max(complement, space.pi(perp).norm() / (1.0 + space.norm(f)));
  }
  const CMatrix p = space.projector();
  Eigen::VectorXd mu(n);
  for (Eigen::Index s = 0; s < n; ++s) mu(s) = fam.weights[static_cast<std::size_t>(s)];
  const double idempotent = (p * p - p).norm();
  // self-adjoint in the mu-inner product: M P = (M P)^H
  const CMatrix mp = mu.asDiagonal() * p;
  const double self_adjoint = (mp - mp.adjoint()).norm();
  const std::size_t rank = space.rank();

  ScenarioResult r;
  r.report["family"] = Json{{"label", fam.label}, {"d", fam.d}, {"points", fam.size()}};
  r.report["tightness"] = io::to_json(tight);
  r.report["samples"] = samples;
  r.report["residuals"] = Json{{"parseval", parseval},
                               {"reconstruction", reconstruction},
                               {"isometry", isometry},
                               {"complement", complement},
                               {"projector_idempotent", idempotent},
                               {"projector_self_adjoint", self_adjoint}};
  r.report["projector_rank"] = rank;
  r.report["complement_dimension"] = fam.size() - rank;
  r.assertions.push_back(holds("tightness", tight.pass));
  r.assertions.push_back(at_most("tightness_frobenius", tight.frobenius_residual, c.tol));
  r.assertions.push_back(at_most("parseval", parseval, c.tol));
  r.assertions.push_back(at_most("reconstruction", reconstruction, c.tol));
  r.assertions.push_back(at_most("isometry", isometry, c.tol));
  r.assertions.push_back(at_most("complement", complement, c.tol));
  r.assertions.push_back(at_most("projector_idempotent", idempotent, c.tol));
  r.assertions.push_back(at_most("projector_self_adjoint", self_adjoint, c.tol));
  r.assertions.push_back(holds("projector_rank_d2", rank == fam.d * fam.d));
  return r;
}

ScenarioResult run_representation(const ScenarioConfig& c) {
  std::vector<std::size_t> ladder = c.ladder.empty() ? std::vector<std::size_t>{4, 8, 16} : c.ladder;
  if (ladder.size() < 3) throw UsageError("representation needs a ladder of at least 3 levels");
  std::vector<Generator> multipliers;
  if (!c.element.empty()) {
    const auto f = load_element(c);
    if (!f.generator() || f.axes() != 2)
      throw UsageError("representation: the element must carry a 2-axis generator");
    multipliers.push_back(*f.generator());
  } else {
    multipliers = default_multipliers();
  }
  RepresentationOptions options;
  options.seed = c.seed;
  options.tol = c.tol;
  if (c.samples) options.gaussian_samples = *c.samples;
  RepresentationReport rep;
  try {
    rep = representation_check(ladder, multipliers, WeightSystem(2), options);
  } catch (const Rejected& e) {
    ScenarioResult r;
    r.report["rejected"] = e.what();
    r.assertions.push_back(holds("multipliers_in_dual", false));
    return r;
  }
  ScenarioResult r;
  r.report["representation"] = io::to_json(rep);
  for (const auto& l : rep.levels) {
    const std::string n = "n=" + std::to_string(l.n);
    r.assertions.push_back(holds(n + " sandwich_rapid_decay", l.rapid == l.cases));
    r.assertions.push_back(holds(n + " left_members", l.left_members == l.cases));
    r.assertions.push_back(holds(n + " right_members", l.right_members == l.cases));
    r.assertions.push_back(at_most(n + " transport_residual", l.max_residual, 1e-9));
    r.assertions.push_back(at_most(n + " envelope_excess", l.max_envelope_excess, 1.0));
  }
  return r;
}

}  // namespace

OperatorFamily parse_family_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("family spec '" + spec + "' has no ':'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "weyl-heisenberg") {
    const auto n = parse_count(arg, "--family weyl-heisenberg");
    if (n < 2) throw UsageError("--family weyl-heisenberg: n must be at least 2");
    return build_weyl_heisenberg(n);
  }
  if (kind == "random") {
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--family random expects <N>,<d>,<seed>");
    const auto npts = parse_count(parts[0], "--family random N");
    const auto d = parse_count(parts[1], "--family random d");
    const auto seed = parse_count(parts[2], "--family random seed");
    if (d < 1 || npts < d * d) throw UsageError("--family random needs d >= 1 and N >= d^2");
    return build_random_tight(npts, d, seed);
  }
  if (kind == "file") {
    if (!std::filesystem::exists(arg)) throw UsageError("family file '" + arg + "' does not exist");
    auto fam = io::read_family(arg);
    try {
      fam.validate();
    } catch (const std::invalid_argument& e) {
      throw FormatError("points", e.what());
    }
    return fam;
  }
  throw UsageError("unknown family kind '" + kind + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  if (!(config.tol > 0)) throw UsageError("--tol must be positive");
  if (config.samples && *config.samples == 0) throw UsageError("--samples must be positive");
  ScenarioResult r;
  try {
    if (config.scenario == "axioms") r = run_axioms(config);
    else if (config.scenario == "extend") r = run_extend(config);
    else if (config.scenario == "moyal-check") r = run_moyal(config);
    else if (config.scenario == "quantize") r = run_quantize(config);
    else if (config.scenario == "representation") r = run_representation(config);
    else throw UsageError("unknown scenario '" + config.scenario + "'");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Json report;
  report["schema"] = 1;
  report["scenario"] = config.scenario;
  report["config"] = config_json(config);
  report["status"] = r.pass() ? "pass" : "fail";
  Json assertions = Json::array();
  for (const auto& a : r.assertions)
    assertions.push_back(Json{{"name", a.name}, {"value", a.value}, {"limit", a.limit}, {"status", a.pass ? "pass" : "fail"}});
  report["assertions"] = std::move(assertions);
  for (auto it = r.report.begin(); it != r.report.end(); ++it) report[it.key()] = it.value();
  r.report = std::move(report);
  return r;
}

std::string assertions_csv(const ScenarioResult& result) {
  std::ostringstream os;
  os << "assertion,value,limit,status\n";
  for (const auto& a : result.assertions) {
    std::string name = a.name;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char ch : name) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      name = q + "\"";
    }
    os << name << ',' << num(a.value) << ',' << num(a.limit) << ',' << (a.pass ? "pass" : "fail") << '\n';
  }
  return os.str();
}

void write_outputs(const ScenarioResult& result, const std::string& out, const io::Json& metadata) {
  namespace fs = std::filesystem;
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + p.string() + "'");
    f << text;
  };
  write(path, result.report.dump(2) + "\n");
  fs::path csv = path;
  csv.replace_extension(".csv");
  write(csv, assertions_csv(result));
  fs::path meta = path;
  meta.replace_extension(".meta.json");
  write(meta, metadata.dump(2) + "\n");
}

}  // namespace fhlab
