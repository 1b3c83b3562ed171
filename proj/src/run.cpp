#include <chrono>
#include <sstream>

#include "nlie/spec.hpp"

namespace nlie::spec {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &msg) { throw SpecError(path, msg); }

std::string pstr(const Campaign &c, const std::string &key, const std::string &path) {
  if (!c.params.contains(key) || !c.params.at(key).is_string()) fail(path + "/" + key, "expected a string");
  return c.params.at(key).get<std::string>();
}

std::int64_t pint(const Campaign &c, const std::string &key, const std::string &path, std::optional<std::int64_t> dflt = {}) {
  if (!c.params.contains(key)) {
    if (dflt) return *dflt;
    fail(path + "/" + key, "missing integer");
  }
  if (!c.params.at(key).is_number_integer()) fail(path + "/" + key, "expected an integer");
  return c.params.at(key).get<std::int64_t>();
}

const Endomorphism &endo(const Built &b, const std::string &name, const std::string &path) {
  auto it = b.endos.find(name);
  if (it == b.endos.end()) fail(path, "unresolved map '" + name + "'");
  return it->second;
}

const Functional &functional(const Built &b, const std::string &name, const std::string &path) {
  auto it = b.functionals.find(name);
  if (it == b.functionals.end()) fail(path, "unresolved functional '" + name + "'");
  return it->second;
}

std::vector<BasisIndex> window_of(const Campaign &c, const Built &b, const std::string &path) {
  if (c.params.contains("window")) {
    const auto &w = c.params.at("window");
    if (!w.is_object() || !w.contains("lo") || !w.contains("hi")) fail(path + "/window", "expected {lo, hi}");
    return laurent_window(w.at("lo").get<std::int64_t>(), w.at("hi").get<std::int64_t>());
  }
  if (!b.basis) fail(path, "no basis to enumerate");
  return *b.basis;
}

const FiniteNLieAlgebra &algebra(const Built &b, const std::string &path) {
  if (!b.algebra) {
    std::string why = "check needs a finite structure-constant table";
    if (b.closure_failure) why += "; basis is not closed at " + b.closure_failure->witness;
    fail(path, why);
  }
  return *b.algebra;
}

/// "kernel:<functional>" over the algebra's basis.
Subspace subspace_ref(const std::string &ref, const Built &b, const std::string &path) {
  const auto &L = algebra(b, path);
  const std::string pre = "kernel:";
  if (ref.rfind(pre, 0) == 0) {
    const auto &f = functional(b, ref.substr(pre.size()), path);
    Vector phi;
    for (const auto &i : *b.basis) phi.push_back(f.apply_basis(i));
    if (phi.size() != static_cast<std::size_t>(L.dim())) fail(path, "basis size differs from algebra dimension");
    return kernel_of(phi);
  }
  if (ref == "derived") return derived_algebra(L);
  fail(path, "unknown subspace reference '" + ref + "'");
}

json subspace_json(const FiniteNLieAlgebra &L, const Subspace &s, std::size_t max_rows = 8) {
  json rows = json::array();
  for (std::size_t r = 0; r < s.dim() && r < max_rows; ++r) rows.push_back(L.render(to_sparse(s.basis().row(r))));
  return {{"dim", s.dim()}, {"rows", rows}, {"truncated", s.dim() > max_rows}};
}

void from_check(CampaignResult &r, const CheckReport &c) {
  r.counts["evaluated"] = r.counts.value("evaluated", 0) + c.evaluated;
  r.counts["failures"] = r.counts.value("failures", 0) + c.failures;
  if (!c.passed) {
    r.verdict = "fail";
    r.witnesses.push_back(c.check + ": " + c.witness);
  }
}

void run_one(const Campaign &c, const Built &b, const RunOptions &opt, const std::string &path, CampaignResult &r) {
  r.verdict = "pass";
  if (c.check == "fi") {
    if (b.algebra) {
      FiOptions fo;
      fo.mode = c.mode.empty() || c.mode == "exhaustive" ? FiMode::Exhaustive
                : c.mode == "sorted"                      ? FiMode::Sorted
                : c.mode == "sampled"                     ? FiMode::Sampled
                                                          : (fail(path + "/mode", "unknown mode '" + c.mode + "'"), FiMode::Exhaustive);
      fo.samples = static_cast<std::uint64_t>(pint(c, "samples", path, 10000));
      fo.seed = opt.seed;
      fo.parallel = opt.parallel;
      r.details["target"] = "structure constants";
      r.details["dim"] = b.algebra->dim();
      from_check(r, verify_fundamental_identity(*b.algebra, fo));
    } else {
      if (!c.mode.empty() && c.mode != "exhaustive") fail(path + "/mode", "window FI is always exhaustive");
      auto w = window_of(c, b, path);
      r.details["target"] = "window";
      r.details["window_size"] = w.size();
      from_check(r, verify_fundamental_identity(*b.bracket, w, opt.parallel));
    }
  } else if (c.check == "skew") {
    from_check(r, verify_skew(algebra(b, path)));
  } else if (c.check == "simplicity") {
    const auto &L = algebra(b, path);
    SimplicityOptions so;
    so.seed = opt.seed;
    so.parallel = opt.parallel;
    so.budget = opt.budget ? *opt.budget : static_cast<std::uint64_t>(pint(c, "budget", path, static_cast<std::int64_t>(kDefaultLineBudget)));
    std::vector<std::string> refs;
    if (c.params.contains("candidates"))
      for (const auto &x : c.params.at("candidates")) refs.push_back(x.get<std::string>());
    for (const auto &ref : refs) so.candidates.push_back(subspace_ref(ref, b, path + "/candidates"));
    auto cert = certify_simplicity(L, so);
    r.verdict = to_string(cert.verdict);
    r.refused = cert.verdict == SimplicityCertificate::Verdict::Refused;
    r.counts["generators_checked"] = cert.generators_checked;
    r.details["method"] = cert.method;
    if (cert.required_budget) r.details["required_budget"] = cert.required_budget;
    r.details["budget"] = so.budget;
    if (!cert.note.empty()) r.details["note"] = cert.note;
    if (cert.witness) {
      r.witnesses.push_back(subspace_json(L, *cert.witness));
      for (std::size_t i = 0; i < so.candidates.size(); ++i)
        if (*cert.witness == so.candidates[i]) r.details["witness_equals"] = refs[i];
    }
    return;
  } else if (c.check == "ideal") {
    const auto &L = algebra(b, path);
    auto s = subspace_ref(pstr(c, "subspace", path), b, path + "/subspace");
    const bool derived = contains_derived(L, s, opt.parallel);
    const bool ideal = derived || is_ideal(L, s, opt.parallel);
    r.details["dim"] = s.dim();
    r.details["codimension"] = s.codimension();
    r.details["is_ideal"] = ideal;
    r.details["contains_derived"] = derived;
    r.details["maximal"] = ideal && s.codimension() == 1;
    if (!(ideal && derived && s.codimension() == 1)) {
      r.verdict = "fail";
      r.witnesses.push_back(subspace_json(L, s));
    }
  } else if (c.check == "derived-series" || c.check == "lower-central-series") {
    const auto &L = algebra(b, path);
    auto s = c.check == "derived-series" ? derived_series(L) : lower_central_series(L);
    r.details["dims"] = s.dims();
    r.details["vanished"] = s.vanished;
    r.details["stabilized"] = s.stabilized;
    bool ok = true;
    if (c.params.contains("dims")) ok = ok && s.dims() == c.params.at("dims").get<std::vector<std::size_t>>();
    if (c.params.contains("vanish_at"))
      ok = ok && s.vanished && static_cast<std::int64_t>(s.terms.size()) - 1 == pint(c, "vanish_at", path);
    if (!ok) {
      r.verdict = "fail";
      r.witnesses.push_back("observed dims " + json(s.dims()).dump());
    }
  } else if (c.check == "determinant-agreement" || c.check == "coefficient-agreement") {
    json tj = c.check == "determinant-agreement" ? json{{"form", "determinant"}, {"rows", c.params.at("rows")}}
                                                 : c.params.at("target");
    auto other = build_bracket(tj, b, path);
    auto w = window_of(c, b, path);
    const std::int64_t offset = pint(c, "exponent_offset", path, 0);
    CheckReport cr;
    cr.check = c.check;
    for (const auto &x : w)
      for (const auto &y : w)
        for (const auto &z : w) {
          ++cr.evaluated;
          auto u = b.bracket->eval_basis(x, y, z);
          auto v = other->eval_basis(x, y, z);
          bool same;
          if (c.check == "determinant-agreement") {
            same = u == v;
          } else {
            same = u.terms().size() == v.terms().size() && u.terms().size() <= 1;
            if (same && !u.is_zero()) {
              const auto &[iu, cu] = *u.terms().begin();
              const auto &[iv, cv] = *v.terms().begin();
              same = cu == cv && iu.c.at(0) - iv.c.at(0) == offset;
            }
          }
          if (!same) {
            const auto &C = *b.bracket->carrier();
            cr.record_failure("(" + C.render(x) + ", " + C.render(y) + ", " + C.render(z) + "): " + u.to_string() +
                              " vs " + v.to_string());
          }
        }
    r.details["other"] = other->name();
    from_check(r, cr);
  } else if (c.check == "anticommute") {
    from_check(r, check_anticommute(endo(b, pstr(c, "omega", path), path), endo(b, pstr(c, "delta", path), path),
                                    window_of(c, b, path)));
  } else if (c.check == "derivation") {
    from_check(r, check_derivation(endo(b, pstr(c, "map", path), path), window_of(c, b, path)));
  } else if (c.check == "involution") {
    from_check(r, check_involution(endo(b, pstr(c, "map", path), path), window_of(c, b, path)));
  } else if (c.check == "conditions") {
    auto rep = check_functional_conditions(
        functional(b, pstr(c, "alpha", path), path), functional(b, pstr(c, "beta", path), path),
        functional(b, pstr(c, "gamma", path), path), endo(b, pstr(c, "delta", path), path),
        endo(b, pstr(c, "omega", path), path), window_of(c, b, path));
    from_check(r, rep.alpha);
    from_check(r, rep.beta);
    from_check(r, rep.gamma);
  } else if (c.check == "homomorphism") {
    auto target = build_bracket(c.params.at("target"), b, path + "/target");
    HomOptions ho;
    ho.require_invertible = c.params.value("require_invertible", true);
    if (c.params.contains("intertwine"))
      for (const auto &pr : c.params.at("intertwine"))
        ho.intertwine.emplace_back(endo(b, pr.at(0).get<std::string>(), path), endo(b, pr.at(1).get<std::string>(), path));
    if (c.params.contains("only_with")) ho.only_with = b.carrier->parse_index(pstr(c, "only_with", path));
    auto rep = check_homomorphism(endo(b, pstr(c, "sigma", path), path), *b.bracket, *target, window_of(c, b, path), ho);
    r.details["target"] = target->name();
    from_check(r, rep.invertible);
    from_check(r, rep.bracket);
    for (const auto &x : rep.intertwining) from_check(r, x);
  } else if (c.check == "grading") {
    auto [plus, minus] = symmetric_generators(b.carrier, pint(c, "radius", path));
    auto rep = check_grading(*b.bracket, endo(b, pstr(c, "omega", path), path), endo(b, pstr(c, "delta", path), path),
                             plus, minus);
    from_check(r, rep.directness);
    from_check(r, rep.plus_abelian);
    from_check(r, rep.minus_abelian);
    from_check(r, rep.delta_swaps);
    r.details["mixed_evaluated"] = rep.mixed_evaluated;
    r.details["mixed_nonzero"] = rep.mixed_nonzero;
    if (!rep.mixed_example.empty()) r.details["mixed_example"] = rep.mixed_example;
  } else if (c.check == "divisibility") {
    Element g(b.carrier);
    for (const auto &t : c.params.at("generator"))
      g.add_term(idx(t.at(0).get<std::int64_t>()),
                 FieldElement::parse(t.at(1).is_string() ? t.at(1).get<std::string>() : t.at(1).dump(), b.field));
    r.details["generator"] = g.to_string();
    from_check(r, check_divisibility_ideal(*b.bracket, g, pint(c, "j_radius", path), pint(c, "radius", path)));
  } else {
    fail(path + "/check", "unknown check '" + c.check + "'");
  }
}

} // namespace

std::vector<CampaignResult> run(const Document &doc, const RunOptions &opt) {
  const Built b = build(doc, true);
  std::vector<CampaignResult> out;
  for (std::size_t i = 0; i < doc.campaigns.size(); ++i) {
    const auto &c = doc.campaigns[i];
    CampaignResult r;
    r.name = c.name;
    r.check = c.check;
    r.mode = c.mode;
    r.expected = c.expect;
    r.seed = opt.seed;
    const auto t0 = std::chrono::steady_clock::now();
    run_one(c, b, opt, "/campaigns/" + std::to_string(i), r);
    r.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.as_expected = r.verdict == r.expected;
    if (c.check == "simplicity") r.failed = !r.refused && !r.as_expected;
    else r.failed = r.verdict == "fail";
    out.push_back(std::move(r));
  }
  return out;
}

int exit_status(const std::vector<CampaignResult> &results) {
  bool refused = false;
  for (const auto &r : results) {
    if (r.failed) return 1;
    refused = refused || r.refused;
  }
  return refused ? 2 : 0;
}

json report_json(const Document &doc, const std::vector<CampaignResult> &results, const RunOptions &opt) {
  json j;
  j["spec"] = doc.name;
  j["claim"] = doc.claim;
  j["field"] = doc.field;
  j["seed"] = opt.seed;
  j["parallel"] = opt.parallel;
  j["campaigns"] = json::array();
  for (const auto &r : results)
    j["campaigns"].push_back({{"name", r.name},
                              {"check", r.check},
                              {"mode", r.mode},
                              {"verdict", r.verdict},
                              {"expected", r.expected},
                              {"as_expected", r.as_expected},
                              {"counts", r.counts},
                              {"witnesses", r.witnesses},
                              {"details", r.details},
                              {"seed", r.seed},
                              {"duration_s", r.duration_s}});
  j["exit_status"] = exit_status(results);
  return j;
}

json export_constants(const Document &doc) {
  const Built b = build(doc, true);
  if (!b.algebra) {
    std::string why = "export needs a closed finite basis";
    if (b.closure_failure) why += "; " + b.closure_failure->witness;
    throw Error(why);
  }
  const auto &L = *b.algebra;
  json j;
  j["spec"] = doc.name;
  j["field"] = L.field().name();
  j["dim"] = L.dim();
  j["arity"] = L.arity();
  j["labels"] = L.labels();
  j["metadata"] = L.metadata();
  j["constants"] = json::array();
  for (const auto &[key, v] : L.constants()) {
    json terms = json::array();
    for (const auto &[l, c] : v) terms.push_back({l, c.to_string()});
    j["constants"].push_back({{"idx", key}, {"terms", terms}});
  }
  return j;
}

std::string describe(const Document &doc) {
  const Built b = build(doc, false);
  std::ostringstream os;
  os << doc.name << "\n";
  if (!doc.claim.empty()) os << "  claim:   " << doc.claim << "\n";
  os << "  field:   " << b.field.name() << "\n";
  os << "  carrier: " << b.carrier->describe() << "\n";
  os << "  bracket: " << b.bracket->name() << " (" << b.bracket->form() << ")\n";
  if (b.algebra) {
    os << "  algebra: dim " << b.algebra->dim() << "\n";
    for (const auto &[k, v] : b.algebra->metadata()) os << "    " << k << ": " << v << "\n";
  }
  if (b.basis) os << "  basis:   " << b.basis->size() << " elements (" << doc.basis.value("kind", "") << ")\n";
  for (const auto &m : doc.maps) os << "  map " << m.name << ": " << m.kind << " " << m.params.dump() << "\n";
  for (const auto &c : doc.campaigns)
    os << "  campaign " << c.name << ": " << c.check << (c.mode.empty() ? "" : " [" + c.mode + "]") << ", expect "
       << c.expect << "\n";
  return os.str();
}

} // namespace nlie::spec
