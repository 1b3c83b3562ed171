#include "nlie/spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nlie::spec {

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &msg) { throw SpecError(path, msg); }

const json &need(const json &j, const std::string &key, const std::string &path) {
  if (!j.is_object() || !j.contains(key)) fail(path, "missing field '" + key + "'");
  return j.at(key);
}

std::string str(const json &j, const std::string &key, const std::string &path) {
  const auto &v = need(j, key, path);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::string str_or(const json &j, const std::string &key, const std::string &path, std::string dflt) {
  return j.contains(key) ? str(j, key, path) : dflt;
}

std::int64_t integer(const json &j, const std::string &key, const std::string &path) {
  const auto &v = need(j, key, path);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json &j, const std::string &key, const std::string &path, std::int64_t dflt) {
  return j.contains(key) ? integer(j, key, path) : dflt;
}

FieldElement scalar(const json &v, const FieldDescriptor &F, const std::string &path) {
  try {
    if (v.is_number_integer()) return FieldElement::from_int(v.get<long long>(), F);
    if (v.is_string()) return FieldElement::parse(v.get<std::string>(), F);
  } catch (const HypothesisViolation &) {
    throw;
  } catch (const Error &e) {
    fail(path, e.what());
  }
  fail(path, "expected a scalar (integer or string)");
}

std::vector<FieldElement> scalars(const json &j, const std::string &key, const FieldDescriptor &F,
                                  const std::string &path) {
  std::vector<FieldElement> out;
  if (!j.contains(key)) return out;
  const auto &a = j.at(key);
  if (!a.is_array()) fail(path + "/" + key, "expected an array");
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(scalar(a[i], F, path + "/" + key + "/" + std::to_string(i)));
  return out;
}

/// Splits reserved keys off an object; the rest becomes params.
json rest_of(const json &j, const std::set<std::string> &reserved) {
  json out = json::object();
  for (const auto &[k, v] : j.items())
    if (!reserved.count(k)) out[k] = v;
  return out;
}

Named named(const json &j, const std::string &kind_key, bool with_name, const std::string &path) {
  if (!j.is_object()) fail(path, "expected an object");
  Named n;
  if (with_name) n.name = str(j, "name", path);
  n.kind = str(j, kind_key, path);
  n.params = rest_of(j, {"name", kind_key});
  return n;
}

json with_keys(json params, std::initializer_list<std::pair<const char *, json>> keys) {
  for (const auto &[k, v] : keys) params[k] = v;
  return params;
}

const std::set<std::string> kChecks = {
    "fi",          "skew",        "simplicity", "ideal",        "derived-series", "lower-central-series",
    "determinant-agreement", "coefficient-agreement", "anticommute", "derivation", "involution",
    "conditions",  "homomorphism", "grading",   "divisibility"};

} // namespace

// ---------------------------------------------------------------- parse / render

Document parse_json(const json &j) {
  if (!j.is_object()) fail("", "document must be a JSON object");
  static const std::set<std::string> top = {"version", "name",  "claim",     "field",    "carrier",
                                            "maps",    "bracket", "basis", "mutations", "campaigns"};
  for (const auto &[k, v] : j.items())
    if (!top.count(k)) fail("/" + k, "unknown field");
  Document d;
  d.version = static_cast<int>(integer(j, "version", ""));
  if (d.version != 1) fail("/version", "only version 1 is supported");
  d.name = str(j, "name", "");
  d.claim = str_or(j, "claim", "", "");
  d.field = str(j, "field", "");
  d.carrier = named(need(j, "carrier", ""), "shape", false, "/carrier");
  if (j.contains("maps")) {
    const auto &m = j.at("maps");
    if (!m.is_array()) fail("/maps", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto n = named(m[i], "kind", true, "/maps/" + std::to_string(i));
      if (n.name == "id") fail("/maps/" + std::to_string(i) + "/name", "'id' is reserved");
      if (!seen.insert(n.name).second) fail("/maps/" + std::to_string(i) + "/name", "duplicate map '" + n.name + "'");
      d.maps.push_back(std::move(n));
    }
  }
  d.bracket = need(j, "bracket", "");
  if (!d.bracket.is_object()) fail("/bracket", "expected an object");
  str(d.bracket, "form", "/bracket");
  d.basis = need(j, "basis", "");
  if (!d.basis.is_object()) fail("/basis", "expected an object");
  str(d.basis, "kind", "/basis");
  if (j.contains("mutations")) {
    const auto &m = j.at("mutations");
    if (!m.is_array()) fail("/mutations", "expected an array");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = "/mutations/" + std::to_string(i);
      Mutation mu;
      mu.kind = str(m[i], "kind", p);
      if (mu.kind != "constant" && mu.kind != "entry") fail(p + "/kind", "unknown mutation '" + mu.kind + "'");
      const auto &ix = need(m[i], "indices", p);
      if (!ix.is_array()) fail(p + "/indices", "expected an array");
      for (const auto &x : ix) {
        if (!x.is_number_integer()) fail(p + "/indices", "expected integers");
        mu.indices.push_back(x.get<int>());
      }
      const auto &val = need(m[i], "value", p);
      if (!val.is_array()) fail(p + "/value", "expected [[index, coefficient], ...]");
      for (const auto &t : val) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer())
          fail(p + "/value", "expected [[index, coefficient], ...]");
        mu.value.emplace_back(t[0].get<int>(), t[1].is_string() ? t[1].get<std::string>() : t[1].dump());
      }
      d.mutations.push_back(std::move(mu));
    }
  }
  const auto &cs = need(j, "campaigns", "");
  if (!cs.is_array()) fail("/campaigns", "expected an array");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string p = "/campaigns/" + std::to_string(i);
    if (!cs[i].is_object()) fail(p, "expected an object");
    Campaign c;
    c.name = str(cs[i], "name", p);
    c.check = str(cs[i], "check", p);
    if (!kChecks.count(c.check)) fail(p + "/check", "unknown check '" + c.check + "'");
    c.mode = str_or(cs[i], "mode", p, "");
    c.expect = str_or(cs[i], "expect", p, "pass");
    c.params = rest_of(cs[i], {"name", "check", "mode", "expect"});
    d.campaigns.push_back(std::move(c));
  }
  build(d, false);
  return d;
}

Document parse(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  return parse_json(j);
}

json to_json(const Document &d) {
  json j;
  j["version"] = d.version;
  j["name"] = d.name;
  if (!d.claim.empty()) j["claim"] = d.claim;
  j["field"] = d.field;
  j["carrier"] = with_keys(d.carrier.params, {{"shape", d.carrier.kind}});
  if (!d.maps.empty()) {
    j["maps"] = json::array();
    for (const auto &m : d.maps) j["maps"].push_back(with_keys(m.params, {{"name", m.name}, {"kind", m.kind}}));
  }
  j["bracket"] = d.bracket;
  j["basis"] = d.basis;
  if (!d.mutations.empty()) {
    j["mutations"] = json::array();
    for (const auto &m : d.mutations) {
      json v = json::array();
      for (const auto &[l, c] : m.value) v.push_back({l, c});
      j["mutations"].push_back({{"kind", m.kind}, {"indices", m.indices}, {"value", v}});
    }
  }
  j["campaigns"] = json::array();
  for (const auto &c : d.campaigns) {
    json o = with_keys(c.params, {{"name", c.name}, {"check", c.check}, {"expect", c.expect}});
    if (!c.mode.empty()) o["mode"] = c.mode;
    j["campaigns"].push_back(std::move(o));
  }
  return j;
}

std::string render(const Document &doc) { return to_json(doc).dump(2) + "\n"; }

Document load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const SpecError &e) {
    throw SpecError(path.filename().string() + ":" + e.path(), e.what());
  }
}

// ---------------------------------------------------------------- build

namespace {

CarrierPtr build_carrier(const Named &c, Built &b) {
  const std::string p = "/carrier";
  const auto &q = c.params;
  if (c.kind == "laurent") return Carrier::laurent(b.field, static_cast<int>(integer_or(q, "vars", p, 1)));
  if (c.kind == "group") {
    std::vector<std::int64_t> tors;
    if (q.contains("torsion")) tors = q.at("torsion").get<std::vector<std::int64_t>>();
    return Carrier::group(b.field, static_cast<int>(integer_or(q, "free_rank", p, 0)), tors);
  }
  if (c.kind == "cyclic-quotient") return Carrier::cyclic_quotient(b.field, integer(q, "p", p));
  if (c.kind == "abstract") {
    std::vector<std::string> labels;
    if (q.contains("labels")) labels = q.at("labels").get<std::vector<std::string>>();
    return Carrier::abstract(b.field, static_cast<int>(integer(q, "dim", p)), {}, labels);
  }
  if (c.kind == "gamma-span") {
    if (!(b.field == FieldDescriptor::gaussian())) fail(p, "gamma matrices live over Q(i)");
    return Carrier::gamma_span();
  }
  if (c.kind == "lie") {
    const std::string a = str(q, "algebra", p);
    if (a == "sl2") b.lie = LieAlgebra::sl2(b.field);
    else if (a == "gl") b.lie = LieAlgebra::gl(static_cast<int>(integer(q, "m", p)), b.field);
    else if (a == "abelian") b.lie = LieAlgebra::abelian(static_cast<int>(integer(q, "dim", p)), b.field);
    else fail(p + "/algebra", "unknown Lie algebra '" + a + "'");
    return b.lie->carrier();
  }
  fail(p + "/shape", "unknown carrier shape '" + c.kind + "'");
}

const Endomorphism &endo_ref(const Built &b, const std::string &name, const std::string &path) {
  auto it = b.endos.find(name);
  if (it == b.endos.end()) fail(path, "unresolved map '" + name + "'");
  return it->second;
}

const GroupHom &hom_ref(const Built &b, const std::string &name, const std::string &path) {
  auto it = b.homs.find(name);
  if (it == b.homs.end()) fail(path, "unresolved group homomorphism '" + name + "'");
  return it->second;
}

const Functional &functional_ref(const Built &b, const std::string &name, const std::string &path) {
  auto it = b.functionals.find(name);
  if (it == b.functionals.end()) fail(path, "unresolved functional '" + name + "'");
  return it->second;
}

void build_map(const Named &m, Built &b, const std::string &p) {
  const auto &q = m.params;
  const auto &C = b.carrier;
  auto put = [&](Endomorphism e) { b.endos.emplace(m.name, std::move(e)); };
  auto putf = [&](Functional f) { b.functionals.emplace(m.name, std::move(f)); };
  if (m.kind == "laurent-derivation")
    put(laurent_derivation(C, integer(q, "power", p), static_cast<int>(integer_or(q, "var", p, 0))));
  else if (m.kind == "sign-involution")
    put(laurent_sign_involution(C, integer(q, "eps", p)));
  else if (m.kind == "flip-involution")
    put(laurent_flip_involution(C, scalar(need(q, "lambda", p), b.field, p + "/lambda")));
  else if (m.kind == "scaling")
    put(laurent_scaling(C, scalar(need(q, "scale", p), b.field, p + "/scale")));
  else if (m.kind == "shift") {
    const auto shift = integer(q, "shift", p);
    const auto factor = q.contains("factor") ? scalar(q.at("factor"), b.field, p + "/factor") : FieldElement::one(b.field);
    if (q.value("unit_fixed", false)) {
      put(custom_map(
          C,
          [C, shift, factor](const BasisIndex &i) {
            if (i.c.at(0) == 0) return Element::basis(C, i);
            return Element::basis(C, C->canonical(idx(i.c.at(0) + shift)), factor);
          },
          "shift(" + std::to_string(shift) + ", " + factor.to_string() + ", 1 -> 1)"));
    } else {
      put(laurent_shift(C, shift, factor));
    }
  } else if (m.kind == "group-negation")
    put(group_negation(C));
  else if (m.kind == "identity")
    put(identity_map(C));
  else if (m.kind == "zero")
    put(zero_map(C));
  else if (m.kind == "id-minus")
    put(id_minus(endo_ref(b, str(q, "of", p), p + "/of")));
  else if (m.kind == "hom-derivation")
    put(group_hom_derivation(hom_ref(b, str(q, "hom", p), p + "/hom")));
  else if (m.kind == "group-hom")
    b.homs.emplace(m.name, GroupHom(C, scalars(q, "free", b.field, p), scalars(q, "torsion", b.field, p)));
  else if (m.kind == "alternating-sign")
    putf(alternating_sign(C, static_cast<int>(integer_or(q, "var", p, 0))));
  else if (m.kind == "constant-one")
    putf(constant_one(C));
  else if (m.kind == "exponent-value")
    putf(exponent_value(C, static_cast<int>(integer_or(q, "var", p, 0))));
  else if (m.kind == "hom-functional")
    putf(group_hom_functional(hom_ref(b, str(q, "hom", p), p + "/hom")));
  else if (m.kind == "trace") {
    if (!b.lie) fail(p, "trace needs a Lie carrier");
    putf(trace_functional(*b.lie, C));
  } else if (m.kind == "zero-functional")
    putf(zero_functional(C));
  else
    fail(p + "/kind", "unknown map kind '" + m.kind + "'");
}

FiniteNLieAlgebra structure_from_json(const json &j, const Built &b, const std::string &p) {
  const int dim = b.carrier->abstract_dim();
  FiniteNLieAlgebra::Constants consts;
  const auto &cs = need(j, "constants", p);
  if (!cs.is_array()) fail(p + "/constants", "expected an array");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string q = p + "/constants/" + std::to_string(i);
    auto key = need(cs[i], "idx", q).get<std::vector<int>>();
    SparseVector v;
    for (const auto &t : need(cs[i], "terms", q)) v.emplace_back(t.at(0).get<int>(), scalar(t.at(1), b.field, q + "/terms"));
    std::sort(v.begin(), v.end(), [](const auto &a, const auto &c) { return a.first < c.first; });
    consts[key] = v;
  }
  std::vector<std::string> labels;
  for (const auto &i : b.carrier->finite_basis()) labels.push_back(b.carrier->render(i));
  return FiniteNLieAlgebra::from_constants(b.field, dim, 3, consts, labels);
}

} // namespace

BracketPtr build_bracket(const json &j, const Built &b, const std::string &p) {
  const std::string form = str(j, "form", p);
  const auto &C = b.carrier;
  if (form == "determinant") {
    const auto &rows = need(j, "rows", p);
    if (!rows.is_array()) fail(p + "/rows", "expected an array of map names");
    std::vector<RowOperator> ops;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rp = p + "/rows/" + std::to_string(i);
      if (!rows[i].is_string()) fail(rp, "expected a map name");
      const auto name = rows[i].get<std::string>();
      if (name == "id") ops.emplace_back(IdentityRow{});
      else if (b.endos.count(name)) ops.emplace_back(b.endos.at(name));
      else if (b.functionals.count(name)) ops.emplace_back(b.functionals.at(name));
      else fail(rp, "unresolved map '" + name + "'");
    }
    return std::make_shared<DeterminantBracket>(C, std::move(ops));
  }
  if (form == "group") return std::make_shared<GroupBracket>(hom_ref(b, str(j, "hom", p), p + "/hom"));
  if (form == "laurent-flip")
    return std::make_shared<LaurentFlipBracket>(C, scalar(need(j, "lambda", p), b.field, p + "/lambda"));
  if (form == "laurent-2k") return std::make_shared<Laurent2kBracket>(C, integer(j, "k", p));
  if (form == "delta0") return delta0_bracket(C);
  if (form == "quotient") {
    if (C->shape() != CarrierShape::CyclicQuotient) fail(p, "quotient bracket needs a cyclic-quotient carrier");
    return std::make_shared<Laurent2kBracket>(C, 0, "quotient");
  }
  if (form == "monomial") {
    const auto coef = str(j, "coefficient", p);
    if (coef != "sign-determinant") fail(p + "/coefficient", "unknown coefficient '" + coef + "'");
    return std::make_shared<MonomialBracket>(C, sign_determinant_coefficient(b.field), integer(j, "shift", p), coef);
  }
  if (form == "lie-lift") {
    if (!b.lie) fail(p, "lie-lift needs a Lie carrier");
    return std::make_shared<LieLiftBracket>(*b.lie, C, functional_ref(b, str(j, "functional", p), p + "/functional"));
  }
  fail(p + "/form", "unknown bracket form '" + form + "'");
}

Built build(const Document &doc, bool tabulate_now) {
  Built b;
  try {
    b.field = FieldDescriptor::parse(doc.field);
  } catch (const HypothesisViolation &) {
    throw;
  } catch (const Error &e) {
    fail("/field", e.what());
  }
  b.carrier = build_carrier(doc.carrier, b);
  for (std::size_t i = 0; i < doc.maps.size(); ++i) build_map(doc.maps[i], b, "/maps/" + std::to_string(i));

  const std::string form = str(doc.bracket, "form", "/bracket");
  if (form == "metric-extension") {
    if (!b.lie) fail("/bracket", "metric extension needs a Lie carrier");
    const auto bf = str_or(doc.bracket, "bilinear", "/bracket", "killing");
    if (bf != "killing") fail("/bracket/bilinear", "unknown bilinear form '" + bf + "'");
    b.algebra = std::make_shared<FiniteNLieAlgebra>(metric_extension(*b.lie, b.lie->killing_form()));
  } else if (form == "gamma") {
    if (doc.carrier.kind != "gamma-span") fail("/carrier", "gamma bracket needs the gamma-span carrier");
    b.algebra = std::make_shared<FiniteNLieAlgebra>(gamma_algebra());
  } else if (form == "structure") {
    if (doc.carrier.kind != "abstract") fail("/carrier", "structure constants need an abstract carrier");
    b.algebra = std::make_shared<FiniteNLieAlgebra>(structure_from_json(doc.bracket, b, "/bracket"));
  } else {
    b.bracket = build_bracket(doc.bracket, b, "/bracket");
  }
  if (b.algebra) b.bracket = std::make_shared<StructureBracket>(b.algebra);

  const std::string kind = str(doc.basis, "kind", "/basis");
  const auto &bc = b.bracket->carrier();
  if (kind == "finite") {
    if (!bc->is_finite()) fail("/basis", "carrier has no finite basis");
    b.basis = bc->finite_basis();
  } else if (kind == "window") {
    const auto lo = integer(doc.basis, "lo", "/basis"), hi = integer(doc.basis, "hi", "/basis");
    if (lo > hi) fail("/basis", "empty window");
    b.basis = laurent_window(lo, hi);
    for (const auto &i : *b.basis) bc->validate(i);
  } else if (kind == "list") {
    std::vector<BasisIndex> items;
    for (const auto &s : need(doc.basis, "items", "/basis")) items.push_back(bc->parse_index(s.get<std::string>()));
    b.basis = items;
  } else {
    fail("/basis/kind", "unknown basis kind '" + kind + "'");
  }

  if (tabulate_now && !b.algebra) {
    const double n = static_cast<double>(b.basis->size());
    if (form == "group" && n * n * n > 4e6) {
      b.algebra = std::make_shared<FiniteNLieAlgebra>(lazy_group_algebra(dynamic_cast<const GroupBracket &>(*b.bracket)));
    } else {
      auto t = tabulate(*b.bracket, *b.basis);
      if (auto *a = std::get_if<FiniteNLieAlgebra>(&t)) b.algebra = std::make_shared<FiniteNLieAlgebra>(std::move(*a));
      else b.closure_failure = std::get<ClosureFailure>(t);
    }
  }
  if (tabulate_now && !doc.mutations.empty()) {
    if (!b.algebra) fail("/mutations", "mutations need a finite structure-constant table");
    FiniteNLieAlgebra a = *b.algebra;
    for (std::size_t i = 0; i < doc.mutations.size(); ++i) {
      const auto &m = doc.mutations[i];
      const std::string p = "/mutations/" + std::to_string(i);
      if (m.indices.size() != 3) fail(p + "/indices", "expected three indices");
      for (int x : m.indices)
        if (x < 0 || x >= a.dim()) fail(p + "/indices", "index out of range");
      SparseVector v;
      for (const auto &[l, c] : m.value) {
        auto s = scalar(json(c), a.field(), p + "/value");
        if (!s.is_zero()) v.emplace_back(l, s);
      }
      std::sort(v.begin(), v.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
      a = m.kind == "constant" ? a.with_constant(m.indices, v) : a.with_entry(m.indices, v);
    }
    a.metadata()["mutated"] = "yes";
    b.algebra = std::make_shared<FiniteNLieAlgebra>(std::move(a));
    b.bracket = std::make_shared<StructureBracket>(b.algebra);
  }
  if (b.algebra) b.algebra = [&] {
    auto a = std::make_shared<FiniteNLieAlgebra>(*b.algebra);
    a->metadata()["spec"] = doc.name;
    return a;
  }();
  return b;
}

std::filesystem::path bundled_dir() { return NLIE_SPEC_DIR; }

std::vector<std::string> bundled_names() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(bundled_dir()))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

Document resolve(const std::string &name_or_path) {
  std::filesystem::path p(name_or_path);
  if (std::filesystem::is_regular_file(p)) return load(p);
  auto q = bundled_dir() / (name_or_path + ".json");
  if (std::filesystem::is_regular_file(q)) return load(q);
  throw Error("no spec file or bundled spec named '" + name_or_path + "'");
}

} // namespace nlie::spec
