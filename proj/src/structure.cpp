#include "nlie/structure.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <random>
#include <sstream>

namespace nlie {

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

bool next_combination(std::vector<int> &c, int d) {
  const int k = static_cast<int>(c.size());
  int p = k - 1;
  while (p >= 0 && c[static_cast<std::size_t>(p)] == d - k + p) --p;
  if (p < 0) return false;
  ++c[static_cast<std::size_t>(p)];
  for (int q = p + 1; q < k; ++q) c[static_cast<std::size_t>(q)] = c[static_cast<std::size_t>(q - 1)] + 1;
  return true;
}

/// Strictly increasing k-tuples drawn from lo..d-1, lexicographic.
template <class Fn> bool for_each_sorted(int d, int k, int lo, Fn &&fn) {
  if (k == 0) return fn(std::vector<int>{});
  if (d - lo < k) return true;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = lo + i;
  do
    if (!fn(c)) return false;
  while (next_combination(c, d) );
  return true;
}

std::string tuple_text(const FiniteNLieAlgebra &L, const std::vector<int> &t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << (i == static_cast<std::size_t>(L.arity()) ? " | " : ", ");
    os << L.label(t[i]);
  }
  os << ')';
  return os.str();
}

std::string index_text(const Carrier &c, const std::vector<BasisIndex> &t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << c.render(t[i]);
  os << ')';
  return os.str();
}

SparseVector sparse_row(const Subspace &s, std::size_t r) { return to_sparse(s.basis().row(r)); }

FieldElement dot(const SparseVector &v, std::span<const FieldElement> row, const FieldDescriptor &f) {
  FieldElement acc = FieldElement::zero(f);
  for (const auto &[i, c] : v) {
    const auto &a = row[static_cast<std::size_t>(i)];
    if (!a.is_zero()) acc += c * a;
  }
  return acc;
}

} // namespace

std::string to_string(FiMode m) {
  switch (m) {
  case FiMode::Exhaustive: return "exhaustive";
  case FiMode::Sorted: return "sorted";
  case FiMode::Sampled: return "sampled";
  }
  return "?";
}

CheckReport verify_skew(const FiniteNLieAlgebra &L) {
  CheckReport rep;
  rep.check = "skew";
  rep.hypothesis = "bracket alternates under permutation";
  const int d = L.dim(), n = L.arity();
  SparseVector s1, s2;
  auto check = [&](const std::vector<int> &t) {
    ++rep.evaluated;
    std::vector<int> sorted = t;
    int sign = sort_with_sign(sorted);
    SparseVector got = L.bracket(t, s1);
    SparseVector want;
    if (sign != 0) {
      want = L.bracket(sorted, s2);
      if (sign < 0)
        for (auto &[i, c] : want) c = -c;
    }
    if (got != want)
      rep.record_failure(tuple_text(L, t) + " gives " + L.render(got) + ", expected " + L.render(want));
  };
  double slots = 1;
  for (int i = 0; i < n; ++i) slots *= d;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  if (slots <= 4e6) {
    while (true) {
      check(t);
      std::size_t i = t.size();
      while (i-- > 0) {
        if (++t[i] < d) break;
        t[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  } else {
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_int_distribution<int> pick(0, d - 1);
    for (int s = 0; s < 200'000; ++s) {
      for (auto &x : t) x = pick(rng);
      check(t);
    }
    rep.hypothesis += " (200000 sampled tuples)";
  }
  return rep;
}

CheckReport verify_fundamental_identity(const FiniteNLieAlgebra &L, const FiOptions &opt) {
  CheckReport rep;
  rep.check = "fundamental identity";
  rep.hypothesis = to_string(opt.mode);
  if (opt.mode == FiMode::Sampled) {
    rep.hypothesis += " seed=" + std::to_string(opt.seed);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, L.dim() - 1);
    std::vector<int> t(static_cast<std::size_t>(2 * L.arity() - 1));
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
      for (auto &x : t) x = pick(rng);
      ++rep.evaluated;
      auto r = kernels::fi_residual(L, t);
      if (!r.empty()) rep.record_failure(tuple_text(L, t) + " residual " + L.render(r));
    }
    return rep;
  }
  const auto order = opt.mode == FiMode::Sorted ? kernels::TupleOrder::Sorted : kernels::TupleOrder::Full;
  auto scan = opt.parallel ? kernels::fi_scan_parallel(L, order) : kernels::fi_scan_serial(L, order);
  rep.evaluated = scan.evaluated;
  if (scan.failures) {
    rep.passed = false;
    rep.failures = scan.failures;
    rep.witness = tuple_text(L, *scan.witness) + " residual " + L.render(scan.residual);
  }
  return rep;
}

CheckReport verify_fundamental_identity(const TriBracket &b, const std::vector<BasisIndex> &window,
                                        bool parallel) {
  CheckReport rep;
  rep.check = "fundamental identity";
  rep.hypothesis = "window " + std::to_string(window.size()) + "^5";
  const auto &C = b.carrier();
  const auto w = static_cast<std::int64_t>(window.size());
  std::vector<CheckReport> parts(window.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t i0 = 0; i0 < w; ++i0) {
    auto &part = parts[static_cast<std::size_t>(i0)];
    const auto &x1 = window[static_cast<std::size_t>(i0)];
    const Element e1 = Element::basis(C, x1);
    for (const auto &x2 : window)
      for (const auto &x3 : window) {
        const Element e2 = Element::basis(C, x2), e3 = Element::basis(C, x3);
        const Element inner = b.eval_basis(x1, x2, x3);
        for (const auto &y2 : window)
          for (const auto &y3 : window) {
            const Element f2 = Element::basis(C, y2), f3 = Element::basis(C, y3);
            ++part.evaluated;
            Element r = b.eval(inner, f2, f3);
            r -= b.eval(b.eval_basis(x1, y2, y3), e2, e3);
            r -= b.eval(e1, b.eval_basis(x2, y2, y3), e3);
            r -= b.eval(e1, e2, b.eval_basis(x3, y2, y3));
            if (!r.is_zero())
              part.record_failure(index_text(*C, {x1, x2, x3, y2, y3}) + " residual " + r.to_string());
          }
      }
  }
  for (auto &p : parts) {
    rep.evaluated += p.evaluated;
    if (p.failures) {
      if (rep.passed) rep.witness = p.witness;
      rep.passed = false;
      rep.failures += p.failures;
    }
  }
  return rep;
}

// ---------------------------------------------------------------- subspaces

Vector left_multiply(const FiniteNLieAlgebra &L, const std::vector<int> &J, const Vector &v) {
  std::vector<int> idx(static_cast<std::size_t>(L.arity()));
  std::copy(J.begin(), J.end(), idx.begin() + 1);
  SparseVector acc, scratch;
  for (int i = 0; i < L.dim(); ++i) {
    const auto &c = v[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    idx[0] = i;
    axpy(acc, c, L.bracket(idx, scratch));
  }
  return to_dense(acc, static_cast<std::size_t>(L.dim()), L.field());
}

Subspace ideal_closure(const FiniteNLieAlgebra &L, const Subspace &seed) {
  const auto d = static_cast<std::size_t>(L.dim());
  if (seed.ambient_dim() != d) throw DimensionMismatch("seed lives in the wrong space");
  EchelonBuilder eb(seed);
  std::deque<Vector> queue;
  for (std::size_t r = 0; r < seed.dim(); ++r) {
    auto row = seed.basis().row(r);
    queue.emplace_back(row.begin(), row.end());
  }
  while (!queue.empty() && eb.dim() < d) {
    Vector v = std::move(queue.front());
    queue.pop_front();
    for_each_sorted(L.dim(), L.arity() - 1, 0, [&](const std::vector<int> &J) {
      Vector w = left_multiply(L, J, v);
      if (eb.insert(w)) queue.push_back(std::move(w));
      return eb.dim() < d;
    });
  }
  if (eb.dim() == d) return Subspace::full(d, L.field());
  return eb.subspace();
}

bool contains_derived(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel) {
  if (s.is_full()) return true;
  const Matrix A = s.annihilator();
  const int d = L.dim(), n = L.arity();
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int i = 0; i < d; ++i) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    std::vector<int> idx(static_cast<std::size_t>(n));
    idx[0] = i;
    SparseVector scratch;
    for_each_sorted(d, n - 1, i + 1, [&](const std::vector<int> &rest) {
      std::copy(rest.begin(), rest.end(), idx.begin() + 1);
      const auto &v = L.bracket(idx, scratch);
      if (!v.empty())
        for (std::size_t r = 0; r < A.rows(); ++r)
          if (!dot(v, A.row(r), L.field()).is_zero()) {
            ok = false;
            return false;
          }
      return ok.load(std::memory_order_relaxed);
    });
  }
  return ok;
}

bool is_ideal(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel) {
  if (s.ambient_dim() != static_cast<std::size_t>(L.dim())) throw DimensionMismatch("subspace in wrong space");
  if (s.is_zero() || s.is_full()) return true;
  const auto d = static_cast<std::uint64_t>(L.dim()), n = static_cast<std::uint64_t>(L.arity());
  const double via_derived = static_cast<double>(binomial(d, n)) * static_cast<double>(s.codimension());
  const double direct = static_cast<double>(s.dim()) * static_cast<double>(binomial(d, n - 1)) * static_cast<double>(d);
  if (via_derived <= direct && contains_derived(L, s, parallel)) return true;
  const Matrix A = s.annihilator();
  for (std::size_t r = 0; r < s.dim(); ++r) {
    auto row = s.basis().row(r);
    const Vector v(row.begin(), row.end());
    bool ok = for_each_sorted(L.dim(), L.arity() - 1, 0, [&](const std::vector<int> &J) {
      const Vector w = left_multiply(L, J, v);
      for (std::size_t a = 0; a < A.rows(); ++a) {
        FieldElement acc = FieldElement::zero(L.field());
        for (std::size_t c = 0; c < w.size(); ++c)
          if (!w[c].is_zero()) acc += w[c] * A.at(a, c);
        if (!acc.is_zero()) return false;
      }
      return true;
    });
    if (!ok) return false;
  }
  return true;
}

bool is_maximal_codim1(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel) {
  return s.codimension() == 1 && is_ideal(L, s, parallel);
}

Subspace kernel_of(const Vector &phi) {
  if (phi.empty()) throw DimensionMismatch("empty functional");
  const auto &f = phi.front().descriptor();
  auto m = Matrix::from_rows({phi}, phi.size(), f);
  return Subspace::span(nullspace(m), phi.size(), f);
}

Subspace bracket_span(const FiniteNLieAlgebra &L, const Subspace &first, const Subspace &rest) {
  const auto d = static_cast<std::size_t>(L.dim());
  EchelonBuilder eb(d, L.field());
  std::vector<SparseVector> args(static_cast<std::size_t>(L.arity()));
  std::vector<SparseVector> rest_rows;
  for (std::size_t r = 0; r < rest.dim(); ++r) rest_rows.push_back(sparse_row(rest, r));
  for (std::size_t r = 0; r < first.dim() && eb.dim() < d; ++r) {
    args[0] = sparse_row(first, r);
    for_each_sorted(static_cast<int>(rest.dim()), L.arity() - 1, 0, [&](const std::vector<int> &J) {
      for (std::size_t k = 0; k < J.size(); ++k) args[k + 1] = rest_rows[static_cast<std::size_t>(J[k])];
      auto v = L.bracket(args);
      if (!v.empty()) eb.insert(to_dense(v, d, L.field()));
      return eb.dim() < d;
    });
  }
  return eb.subspace();
}

Subspace derived_algebra(const FiniteNLieAlgebra &L) {
  const auto d = static_cast<std::size_t>(L.dim());
  EchelonBuilder eb(d, L.field());
  SparseVector scratch;
  for_each_sorted(L.dim(), L.arity(), 0, [&](const std::vector<int> &I) {
    const auto &v = L.bracket(I, scratch);
    if (!v.empty()) eb.insert(to_dense(v, d, L.field()));
    return eb.dim() < d;
  });
  return eb.subspace();
}

std::vector<std::size_t> SeriesReport::dims() const {
  std::vector<std::size_t> out;
  for (const auto &t : terms) out.push_back(t.dim());
  return out;
}

namespace {

SeriesReport run_series(const FiniteNLieAlgebra &L, SeriesReport::Kind kind, std::size_t max_steps) {
  SeriesReport rep;
  rep.kind = kind;
  const auto full = Subspace::full(static_cast<std::size_t>(L.dim()), L.field());
  rep.terms.push_back(full);
  for (std::size_t s = 0; s < max_steps; ++s) {
    const auto &cur = rep.terms.back();
    Subspace next = kind == SeriesReport::Kind::Derived
                        ? (s == 0 ? derived_algebra(L) : bracket_span(L, cur, cur))
                        : (s == 0 ? derived_algebra(L) : bracket_span(L, cur, full));
    const bool same = next == cur;
    rep.terms.push_back(std::move(next));
    if (rep.terms.back().is_zero()) {
      rep.vanished = true;
      break;
    }
    if (same) {
      rep.stabilized = true;
      break;
    }
  }
  return rep;
}

} // namespace

SeriesReport derived_series(const FiniteNLieAlgebra &L, std::size_t max_steps) {
  return run_series(L, SeriesReport::Kind::Derived, max_steps);
}

SeriesReport lower_central_series(const FiniteNLieAlgebra &L, std::size_t max_steps) {
  return run_series(L, SeriesReport::Kind::LowerCentral, max_steps);
}

// ---------------------------------------------------------------- simplicity

std::string to_string(SimplicityCertificate::Verdict v) {
  switch (v) {
  case SimplicityCertificate::Verdict::Simple: return "simple";
  case SimplicityCertificate::Verdict::NonSimple: return "non-simple";
  case SimplicityCertificate::Verdict::EvidenceOnly: return "evidence-only";
  case SimplicityCertificate::Verdict::Refused: return "refused";
  }
  return "?";
}

SimplicityCertificate certify_simplicity(const FiniteNLieAlgebra &L, const SimplicityOptions &opt) {
  SimplicityCertificate cert;
  const auto d = static_cast<std::size_t>(L.dim());
  const auto &F = L.field();

  for (std::size_t i = 0; i < opt.candidates.size(); ++i) {
    const auto &c = opt.candidates[i];
    if (c.is_zero() || c.is_full()) continue;
    if (is_ideal(L, c, opt.parallel)) {
      cert.verdict = SimplicityCertificate::Verdict::NonSimple;
      cert.method = "candidate-ideal";
      cert.generators_checked = i + 1;
      cert.witness = c;
      return cert;
    }
  }
  const std::uint64_t tried = opt.candidates.size();

  Subspace L1 = derived_algebra(L);
  if (L1.is_zero()) {
    cert.verdict = SimplicityCertificate::Verdict::NonSimple;
    cert.method = "derived-zero";
    cert.generators_checked = tried;
    if (d >= 2) cert.witness = Subspace::span({unit_vector(d, 0, F)}, d, F);
    else cert.note = "one-dimensional with zero bracket";
    return cert;
  }
  if (!L1.is_full()) {
    cert.verdict = SimplicityCertificate::Verdict::NonSimple;
    cert.method = "derived-proper";
    cert.generators_checked = tried;
    cert.witness = std::move(L1);
    return cert;
  }

  if (F.is_prime_field()) {
    const std::uint64_t lines = kernels::line_count(F.characteristic(), L.dim());
    cert.required_budget = lines;
    if (lines > opt.budget) {
      cert.verdict = SimplicityCertificate::Verdict::Refused;
      cert.method = "exhaustive-1dim";
      cert.note = std::to_string(lines) + " lines exceed budget " + std::to_string(opt.budget);
      return cert;
    }
    kernels::PrimeAdTable T(L);
    auto scan = opt.parallel ? kernels::line_scan_parallel(T) : kernels::line_scan_serial(T);
    cert.method = "exhaustive-1dim";
    cert.generators_checked = scan.checked;
    if (!scan.first_proper) {
      cert.verdict = SimplicityCertificate::Verdict::Simple;
      return cert;
    }
    std::vector<std::uint32_t> raw(d);
    kernels::decode_line(*scan.first_proper, F.characteristic(), L.dim(), raw.data());
    Vector v;
    for (auto x : raw) v.push_back(FieldElement::residue(x, F));
    cert.verdict = SimplicityCertificate::Verdict::NonSimple;
    cert.witness = ideal_closure(L, Subspace::span({v}, d, F));
    return cert;
  }

  cert.method = "randomized";
  std::vector<Vector> probes;
  for (std::size_t i = 0; i < d; ++i) probes.push_back(unit_vector(d, i, F));
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> pick(-3, 3);
  for (std::size_t k = 0; k < opt.random_probes; ++k) {
    Vector v;
    for (std::size_t i = 0; i < d; ++i) v.push_back(FieldElement::from_int(pick(rng), F));
    if (!is_zero(v)) probes.push_back(std::move(v));
  }
  for (const auto &v : probes) {
    ++cert.generators_checked;
    auto c = ideal_closure(L, Subspace::span({v}, d, F));
    if (!c.is_full()) {
      cert.verdict = SimplicityCertificate::Verdict::NonSimple;
      cert.witness = std::move(c);
      return cert;
    }
  }
  cert.verdict = SimplicityCertificate::Verdict::EvidenceOnly;
  cert.note = "seed " + std::to_string(opt.seed);
  return cert;
}

// ---------------------------------------------------------------- gradings

namespace {

std::size_t rank_of(const std::vector<Element> &xs) {
  if (xs.empty()) return 0;
  std::map<BasisIndex, std::size_t> col;
  for (const auto &x : xs)
    for (const auto &[i, c] : x.terms()) col.emplace(i, 0);
  std::size_t k = 0;
  for (auto &[i, c] : col) c = k++;
  const auto &F = xs.front().field();
  EchelonBuilder eb(col.size(), F);
  for (const auto &x : xs) {
    Vector v = zero_vector(col.size(), F);
    for (const auto &[i, c] : x.terms()) v[col[i]] = c;
    eb.insert(std::move(v));
  }
  return eb.dim();
}

void annihilates(const TriBracket &b, const std::vector<Element> &g, CheckReport &rep) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      for (std::size_t k = j + 1; k < g.size(); ++k) {
        ++rep.evaluated;
        auto v = b.eval(g[i], g[j], g[k]);
        if (!v.is_zero())
          rep.record_failure("[" + g[i].to_string() + ", " + g[j].to_string() + ", " + g[k].to_string() +
                             "] = " + v.to_string());
      }
}

} // namespace

GradingReport check_grading(const TriBracket &b, const Endomorphism &omega, const Endomorphism &delta,
                            const std::vector<Element> &plus, const std::vector<Element> &minus) {
  GradingReport rep;
  rep.directness.check = "direct eigen-decomposition";
  for (const auto &x : plus) {
    ++rep.directness.evaluated;
    if (!(omega(x) == x)) rep.directness.record_failure(x.to_string() + " not fixed by " + omega.name());
  }
  for (const auto &x : minus) {
    ++rep.directness.evaluated;
    if (!(omega(x) == -x)) rep.directness.record_failure(x.to_string() + " not negated by " + omega.name());
  }
  std::vector<Element> all = plus;
  all.insert(all.end(), minus.begin(), minus.end());
  if (rank_of(all) != all.size()) rep.directness.record_failure("generators are linearly dependent");
  if (!rep.directness.passed) throw HypothesisViolation("A_1 and A_-1 form a direct sum", rep.directness.witness);

  rep.plus_abelian.check = "[A_1, A_1, A_1] = 0";
  annihilates(b, plus, rep.plus_abelian);
  rep.minus_abelian.check = "[A_-1, A_-1, A_-1] = 0";
  annihilates(b, minus, rep.minus_abelian);

  rep.delta_swaps.check = delta.name() + " swaps A_1 and A_-1";
  for (const auto &x : plus) {
    ++rep.delta_swaps.evaluated;
    auto y = delta(x);
    if (!(omega(y) == -y)) rep.delta_swaps.record_failure(delta.name() + "(" + x.to_string() + ") = " + y.to_string());
  }
  for (const auto &x : minus) {
    ++rep.delta_swaps.evaluated;
    auto y = delta(x);
    if (!(omega(y) == y)) rep.delta_swaps.record_failure(delta.name() + "(" + x.to_string() + ") = " + y.to_string());
  }

  auto mixed = [&](const std::vector<Element> &two, const std::vector<Element> &one) {
    for (std::size_t i = 0; i < two.size(); ++i)
      for (std::size_t j = i + 1; j < two.size(); ++j)
        for (const auto &z : one) {
          ++rep.mixed_evaluated;
          auto v = b.eval(two[i], two[j], z);
          if (!v.is_zero() && rep.mixed_nonzero++ == 0)
            rep.mixed_example = "[" + two[i].to_string() + ", " + two[j].to_string() + ", " + z.to_string() +
                                "] = " + v.to_string();
        }
  };
  mixed(plus, minus);
  mixed(minus, plus);
  return rep;
}

std::pair<std::vector<Element>, std::vector<Element>> symmetric_generators(const CarrierPtr &c, std::int64_t r) {
  std::vector<Element> plus, minus;
  plus.push_back(Element::basis(c, idx(0)));
  for (std::int64_t i = 1; i <= r; ++i) {
    plus.push_back(Element::basis(c, idx(i)) + Element::basis(c, idx(-i)));
    minus.push_back(Element::basis(c, idx(i)) - Element::basis(c, idx(-i)));
  }
  return {plus, minus};
}

// ---------------------------------------------------------------- homomorphisms

bool HomReport::passed() const {
  return invertible.passed && bracket.passed &&
         std::all_of(intertwining.begin(), intertwining.end(), [](const CheckReport &r) { return r.passed; });
}

HomReport check_homomorphism(const Endomorphism &sigma, const TriBracket &src, const TriBracket &tgt,
                             const std::vector<BasisIndex> &window, const HomOptions &opt) {
  HomReport rep;
  const auto &C = src.carrier();
  if (!C->same_as(*tgt.carrier()) || !C->same_as(*sigma.carrier()))
    throw ConfigurationError("homomorphism check needs one shared carrier");

  std::vector<Element> images;
  for (const auto &i : window) images.push_back(sigma.apply_basis(i));
  rep.invertible.check = "injective on window";
  rep.invertible.evaluated = window.size();
  if (rank_of(images) != window.size()) rep.invertible.record_failure("window images are linearly dependent");
  if (opt.require_invertible && !rep.invertible.passed)
    throw HypothesisViolation("sigma invertible on the window", sigma.name());

  rep.bracket.check = "sigma[a,b,c] = [sigma a, sigma b, sigma c]";
  for (std::size_t i = 0; i < window.size(); ++i)
    for (std::size_t j = 0; j < window.size(); ++j)
      for (std::size_t k = 0; k < window.size(); ++k) {
        if (opt.only_with && window[i] != *opt.only_with && window[j] != *opt.only_with &&
            window[k] != *opt.only_with)
          continue;
        ++rep.bracket.evaluated;
        auto lhs = sigma(src.eval_basis(window[i], window[j], window[k]));
        auto rhs = tgt.eval(images[i], images[j], images[k]);
        if (!(lhs == rhs))
          rep.bracket.record_failure(index_text(*C, {window[i], window[j], window[k]}) + ": " + lhs.to_string() +
                                     " vs " + rhs.to_string());
      }

  for (const auto &[f, g] : opt.intertwine) {
    CheckReport r;
    r.check = "sigma " + f.name() + " = " + g.name() + " sigma";
    for (std::size_t i = 0; i < window.size(); ++i) {
      ++r.evaluated;
      auto lhs = sigma(f.apply_basis(window[i]));
      auto rhs = g(images[i]);
      if (!(lhs == rhs)) r.record_failure(C->render(window[i]) + ": " + lhs.to_string() + " vs " + rhs.to_string());
    }
    rep.intertwining.push_back(std::move(r));
  }
  return rep;
}

// ---------------------------------------------------------------- divisibility

namespace {

Vector dense_poly(const Element &x) {
  const auto lo = x.terms().begin()->first.c.at(0);
  const auto hi = x.terms().rbegin()->first.c.at(0);
  Vector v = zero_vector(static_cast<std::size_t>(hi - lo + 1), x.field());
  for (const auto &[i, c] : x.terms()) v[static_cast<std::size_t>(i.c.at(0) - lo)] = c;
  return v;
}

} // namespace

bool laurent_divides(const Element &g, const Element &f) {
  if (g.is_zero()) throw DivisionByZero();
  if (f.is_zero()) return true;
  if (g.carrier()->shape() != CarrierShape::Laurent || g.carrier()->vars() != 1)
    throw ConfigurationError("divisibility needs a one-variable Laurent carrier");
  Vector num = dense_poly(f);
  const Vector den = dense_poly(g);
  if (den.size() > num.size()) return false;
  const FieldElement lead_inv = den.back().inverse();
  for (std::size_t top = num.size(); top-- >= den.size();) {
    if (num[top].is_zero()) continue;
    const FieldElement q = num[top] * lead_inv;
    const std::size_t shift = top + 1 - den.size();
    for (std::size_t k = 0; k < den.size(); ++k) num[shift + k] -= q * den[k];
  }
  return std::all_of(num.begin(), num.end(), [](const FieldElement &c) { return c.is_zero(); });
}

CheckReport check_divisibility_ideal(const TriBracket &b, const Element &g, std::int64_t jr, std::int64_t ar) {
  CheckReport rep;
  rep.check = "[g t^j, t^a, t^b] divisible by " + g.to_string();
  const auto &C = b.carrier();
  for (std::int64_t j = -jr; j <= jr; ++j) {
    const Element x = g * Element::basis(C, idx(j));
    for (std::int64_t a = -ar; a <= ar; ++a)
      for (std::int64_t c = -ar; c <= ar; ++c) {
        ++rep.evaluated;
        auto v = b.eval(x, Element::basis(C, idx(a)), Element::basis(C, idx(c)));
        if (!laurent_divides(g, v))
          rep.record_failure("j=" + std::to_string(j) + " a=" + std::to_string(a) + " b=" + std::to_string(c) +
                             ": " + v.to_string());
      }
  }
  return rep;
}

} // namespace nlie
