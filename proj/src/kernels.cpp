#include "nlie/kernels.hpp"

#include <atomic>
#include <limits>

#include <omp.h>

namespace nlie::kernels {

namespace {

bool next_combination(std::vector<int> &c, int d) {
  const int k = static_cast<int>(c.size());
  int p = k - 1;
  while (p >= 0 && c[static_cast<std::size_t>(p)] == d - k + p) --p;
  if (p < 0) return false;
  ++c[static_cast<std::size_t>(p)];
  for (int q = p + 1; q < k; ++q) c[static_cast<std::size_t>(q)] = c[static_cast<std::size_t>(q - 1)] + 1;
  return true;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

bool next_tuple(std::vector<int> &t, std::size_t from, int d) {
  for (std::size_t i = t.size(); i-- > from;) {
    if (++t[i] < d) return true;
    t[i] = 0;
  }
  return false;
}

// Work items are enumeration prefixes so the witness order is preserved.
std::vector<std::vector<int>> work_items(const FiniteNLieAlgebra &L, TupleOrder order) {
  const int d = L.dim(), n = L.arity();
  std::vector<std::vector<int>> items;
  if (order == TupleOrder::Full) {
    for (int i = 0; i < d; ++i) items.push_back({i});
  } else if (n <= d) {
    auto c = first_combination(n);
    do items.push_back(c);
    while (next_combination(c, d));
  }
  return items;
}

void scan_item(const FiniteNLieAlgebra &L, TupleOrder order, const std::vector<int> &prefix, FiScan &out) {
  const int d = L.dim(), n = L.arity();
  const std::size_t len = static_cast<std::size_t>(2 * n - 1);
  auto check = [&](const std::vector<int> &t) {
    ++out.evaluated;
    SparseVector r = fi_residual(L, t);
    if (!r.empty()) {
      if (out.failures++ == 0) {
        out.witness = t;
        out.residual = std::move(r);
      }
    }
  };
  std::vector<int> t(len, 0);
  if (order == TupleOrder::Full) {
    std::copy(prefix.begin(), prefix.end(), t.begin());
    do check(t);
    while (next_tuple(t, prefix.size(), d));
    return;
  }
  if (n - 1 > d) return;
  std::copy(prefix.begin(), prefix.end(), t.begin());
  auto y = first_combination(n - 1);
  do {
    std::copy(y.begin(), y.end(), t.begin() + n);
    check(t);
  } while (next_combination(y, d));
}

void merge(FiScan &into, FiScan &&part) {
  into.evaluated += part.evaluated;
  if (part.failures && !into.witness) {
    into.witness = std::move(part.witness);
    into.residual = std::move(part.residual);
  }
  into.failures += part.failures;
}

} // namespace

SparseVector fi_residual(const FiniteNLieAlgebra &L, const std::vector<int> &tuple) {
  const auto n = static_cast<std::size_t>(L.arity());
  std::vector<int> x(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<int> outer(n), inner_idx(n);
  SparseVector s1, s2, res;
  const SparseVector &inner = L.bracket(x, s1);
  for (std::size_t k = 1; k < n; ++k) outer[k] = tuple[n + k - 1];
  for (const auto &[l, c] : inner) {
    outer[0] = l;
    axpy(res, c, L.bracket(outer, s2));
  }
  for (std::size_t i = 0; i < n; ++i) {
    outer[0] = x[i];
    SparseVector part = L.bracket(outer, s1);
    inner_idx = x;
    for (const auto &[l, c] : part) {
      inner_idx[i] = l;
      axpy(res, -c, L.bracket(inner_idx, s2));
    }
  }
  return res;
}

FiScan fi_scan_serial(const FiniteNLieAlgebra &L, TupleOrder order) {
  FiScan total;
  for (const auto &item : work_items(L, order)) {
    FiScan part;
    scan_item(L, order, item, part);
    merge(total, std::move(part));
  }
  return total;
}

FiScan fi_scan_parallel(const FiniteNLieAlgebra &L, TupleOrder order) {
  const auto items = work_items(L, order);
  std::vector<FiScan> parts(items.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i)
    scan_item(L, order, items[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(i)]);
  FiScan total;
  for (auto &p : parts) merge(total, std::move(p));
  return total;
}

// ---------------------------------------------------------------- prime-field lines

PrimeAdTable::PrimeAdTable(const FiniteNLieAlgebra &L) : d_(L.dim()), p_(L.field().characteristic()) {
  if (!L.field().is_prime_field()) throw ConfigurationError("line enumeration needs a prime field");
  const int n = L.arity();
  const auto dd = static_cast<std::size_t>(d_);
  const std::uint64_t pm = p_ - 1;
  lazy_reduce_ = pm == 0 || dd <= std::numeric_limits<std::uint64_t>::max() / (pm * pm);
  if (n - 1 > d_) return;
  auto J = first_combination(n - 1);
  std::vector<int> idx(static_cast<std::size_t>(n));
  SparseVector scratch;
  do {
    std::size_t base = mats_.size();
    mats_.resize(base + dd * dd, 0);
    std::copy(J.begin(), J.end(), idx.begin() + 1);
    for (int i = 0; i < d_; ++i) {
      idx[0] = i;
      for (const auto &[r, c] : L.bracket(idx, scratch))
        mats_[base + static_cast<std::size_t>(r) * dd + static_cast<std::size_t>(i)] =
            static_cast<std::uint32_t>(c.residue_value());
    }
  } while (next_combination(J, d_));
}

void PrimeAdTable::apply(std::size_t j, const std::uint32_t *v, std::uint32_t *out) const {
  const auto dd = static_cast<std::size_t>(d_);
  const std::uint32_t *m = mats_.data() + j * dd * dd;
  for (std::size_t r = 0; r < dd; ++r) {
    const std::uint32_t *row = m + r * dd;
    std::uint64_t acc = 0;
    if (lazy_reduce_) {
      for (std::size_t i = 0; i < dd; ++i) acc += static_cast<std::uint64_t>(row[i]) * v[i];
      acc %= p_;
    } else {
      for (std::size_t i = 0; i < dd; ++i) acc = (acc + static_cast<std::uint64_t>(row[i]) * v[i]) % p_;
    }
    out[r] = static_cast<std::uint32_t>(acc);
  }
}

std::uint64_t line_count(std::uint32_t p, int d) {
  unsigned __int128 total = 0, pw = 1;
  for (int i = 0; i < d; ++i) {
    total += pw;
    pw *= p;
    if (total > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(total);
}

void decode_line(std::uint64_t ordinal, std::uint32_t p, int d, std::uint32_t *v) {
  for (int i = 0; i < d; ++i) v[i] = 0;
  for (int lead = 0; lead < d; ++lead) {
    const std::uint64_t cnt = line_count(p, d - lead) - line_count(p, d - lead - 1);
    if (ordinal < cnt) {
      v[lead] = 1;
      for (int k = d - 1; k > lead; --k) {
        v[k] = static_cast<std::uint32_t>(ordinal % p);
        ordinal /= p;
      }
      return;
    }
    ordinal -= cnt;
  }
  throw DimensionMismatch("line ordinal out of range");
}

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

} // namespace

bool closure_is_full(const PrimeAdTable &T, const std::uint32_t *v,
                     std::vector<std::vector<std::uint32_t>> *basis_out) {
  const int d = T.dim();
  const auto dd = static_cast<std::size_t>(d);
  const std::uint32_t p = T.p();
  std::vector<std::uint32_t> rows(dd * dd), w(dd);
  std::vector<int> piv(dd);
  int rank = 0;
  auto insert = [&](std::uint32_t *x) {
    for (int r = 0; r < rank; ++r) {
      const std::uint32_t c = x[piv[static_cast<std::size_t>(r)]];
      if (!c) continue;
      const std::uint32_t *row = rows.data() + static_cast<std::size_t>(r) * dd;
      const std::uint64_t f = p - c;
      for (std::size_t j = 0; j < dd; ++j)
        if (row[j]) x[j] = static_cast<std::uint32_t>((x[j] + f * row[j]) % p);
    }
    std::size_t lead = 0;
    while (lead < dd && !x[lead]) ++lead;
    if (lead == dd) return false;
    const std::uint64_t inv = inv_mod(x[lead], p);
    std::uint32_t *dst = rows.data() + static_cast<std::size_t>(rank) * dd;
    for (std::size_t j = 0; j < dd; ++j) dst[j] = static_cast<std::uint32_t>(x[j] * inv % p);
    piv[static_cast<std::size_t>(rank)] = static_cast<int>(lead);
    ++rank;
    return true;
  };
  std::copy(v, v + d, w.begin());
  if (!insert(w.data())) return false;
  for (int next = 0; next < rank && rank < d; ++next)
    for (std::size_t j = 0; j < T.count() && rank < d; ++j) {
      T.apply(j, rows.data() + static_cast<std::size_t>(next) * dd, w.data());
      insert(w.data());
    }
  if (rank == d) return true;
  if (basis_out) {
    basis_out->clear();
    for (int r = 0; r < rank; ++r)
      basis_out->emplace_back(rows.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(r) * dd),
                              rows.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(r + 1) * dd));
  }
  return false;
}

LineScan line_scan_serial(const PrimeAdTable &T) {
  LineScan s;
  s.total = line_count(T.p(), T.dim());
  std::vector<std::uint32_t> v(static_cast<std::size_t>(T.dim()));
  for (std::uint64_t ord = 0; ord < s.total; ++ord) {
    decode_line(ord, T.p(), T.dim(), v.data());
    if (!closure_is_full(T, v.data())) {
      s.first_proper = ord;
      s.checked = ord + 1;
      return s;
    }
  }
  s.checked = s.total;
  return s;
}

LineScan line_scan_parallel(const PrimeAdTable &T) {
  LineScan s;
  s.total = line_count(T.p(), T.dim());
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  const auto total = static_cast<std::int64_t>(s.total);
#pragma omp parallel
  {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(T.dim()));
#pragma omp for schedule(dynamic, 4096)
    for (std::int64_t i = 0; i < total; ++i) {
      const auto ord = static_cast<std::uint64_t>(i);
      if (ord > best.load(std::memory_order_relaxed)) continue;
      decode_line(ord, T.p(), T.dim(), v.data());
      if (!closure_is_full(T, v.data())) {
        auto cur = best.load();
        while (ord < cur && !best.compare_exchange_weak(cur, ord)) {
        }
      }
    }
  }
  if (best.load() != std::numeric_limits<std::uint64_t>::max()) {
    s.first_proper = best.load();
    s.checked = *s.first_proper + 1;
  } else {
    s.checked = s.total;
  }
  return s;
}

int max_threads() { return omp_get_max_threads(); }

} // namespace nlie::kernels
