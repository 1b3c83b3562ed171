#include "nlie/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace nlie {

namespace {

constexpr std::size_t kMaxStoredSlots = 4'000'000;

std::size_t power(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && r > SIZE_MAX / base) return SIZE_MAX;
    r *= base;
  }
  return r;
}

SparseVector negated(const SparseVector &v) {
  SparseVector out = v;
  for (auto &[i, c] : out) c = -c;
  return out;
}

void check_vector(const SparseVector &v, int dim, const FieldDescriptor &f) {
  int last = -1;
  for (const auto &[i, c] : v) {
    if (i <= last || i >= dim) throw DimensionMismatch("structure constant vector out of order or range");
    if (c.is_zero()) throw ConfigurationError("explicit zero in structure constant vector");
    if (!(c.descriptor() == f)) throw ConfigurationError("structure constant over wrong field");
    last = i;
  }
}

} // namespace

int sort_with_sign(std::vector<int> &idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

FiniteNLieAlgebra::FiniteNLieAlgebra(const FieldDescriptor &f, int dim, int arity,
                                     std::vector<std::string> labels)
    : field_(f), dim_(dim), arity_(arity), labels_(std::move(labels)) {
  if (dim < 1) throw ConfigurationError("algebra dimension must be positive");
  if (arity < 2) throw ConfigurationError("arity must be at least 2");
  if (labels_.empty())
    for (int i = 0; i < dim; ++i) labels_.push_back("x" + std::to_string(i));
  if (labels_.size() != static_cast<std::size_t>(dim)) throw DimensionMismatch("label count differs from dimension");
}

FiniteNLieAlgebra FiniteNLieAlgebra::from_ordered(const FieldDescriptor &f, int dim, int arity,
                                                  std::vector<SparseVector> table,
                                                  std::vector<std::string> labels) {
  FiniteNLieAlgebra a(f, dim, arity, std::move(labels));
  if (table.size() != power(static_cast<std::size_t>(dim), arity))
    throw DimensionMismatch("ordered table needs d^n entries");
  for (const auto &v : table) check_vector(v, dim, f);
  a.table_ = std::make_shared<const std::vector<SparseVector>>(std::move(table));
  return a;
}

FiniteNLieAlgebra FiniteNLieAlgebra::from_constants(const FieldDescriptor &f, int dim, int arity,
                                                    const Constants &constants,
                                                    std::vector<std::string> labels) {
  const std::size_t slots = power(static_cast<std::size_t>(dim), arity);
  if (slots > kMaxStoredSlots) {
    auto shared = std::make_shared<const Constants>(constants);
    return lazy(
        f, dim, arity,
        [shared](std::span<const int> idx) {
          auto it = shared->find(std::vector<int>(idx.begin(), idx.end()));
          return it == shared->end() ? SparseVector{} : it->second;
        },
        std::move(labels));
  }
  FiniteNLieAlgebra a(f, dim, arity, std::move(labels));
  std::vector<SparseVector> table(slots);
  for (const auto &[key, v] : constants) {
    if (key.size() != static_cast<std::size_t>(arity)) throw DimensionMismatch("constant tuple has wrong arity");
    for (std::size_t i = 0; i < key.size(); ++i)
      if (key[i] < 0 || key[i] >= dim || (i > 0 && key[i - 1] >= key[i]))
        throw ConfigurationError("constant tuples must be strictly increasing basis indices");
    check_vector(v, dim, f);
    if (v.empty()) continue;
    SparseVector neg = negated(v);
    std::vector<int> perm = key;
    do {
      std::vector<int> tmp = perm;
      int s = sort_with_sign(tmp);
      table[a.slot(perm)] = s > 0 ? v : neg;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  a.table_ = std::make_shared<const std::vector<SparseVector>>(std::move(table));
  return a;
}

FiniteNLieAlgebra FiniteNLieAlgebra::lazy(const FieldDescriptor &f, int dim, int arity,
                                          SortedEvaluator eval, std::vector<std::string> labels) {
  FiniteNLieAlgebra a(f, dim, arity, std::move(labels));
  a.lazy_ = std::move(eval);
  return a;
}

std::size_t FiniteNLieAlgebra::slot(std::span<const int> idx) const {
  std::size_t s = 0;
  for (int i : idx) s = s * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return s;
}

const SparseVector &FiniteNLieAlgebra::bracket(std::span<const int> idx, SparseVector &scratch) const {
  if (idx.size() != static_cast<std::size_t>(arity_)) throw DimensionMismatch("bracket needs arity arguments");
  if (table_) return (*table_)[slot(idx)];
  std::vector<int> sorted(idx.begin(), idx.end());
  int s = sort_with_sign(sorted);
  scratch.clear();
  if (s == 0) return scratch;
  scratch = lazy_(sorted);
  if (s < 0)
    for (auto &[i, c] : scratch) c = -c;
  return scratch;
}

SparseVector FiniteNLieAlgebra::bracket_of(std::span<const int> idx) const {
  SparseVector scratch;
  return bracket(idx, scratch);
}

SparseVector FiniteNLieAlgebra::bracket(std::span<const SparseVector> args) const {
  if (args.size() != static_cast<std::size_t>(arity_)) throw DimensionMismatch("bracket needs arity arguments");
  SparseVector acc, scratch;
  std::vector<int> idx(args.size());
  std::vector<FieldElement> prefix(args.size() + 1);
  prefix[0] = FieldElement::one(field_);
  auto rec = [&](auto &self, std::size_t pos) -> void {
    if (pos == args.size()) {
      axpy(acc, prefix[pos], bracket(idx, scratch));
      return;
    }
    for (const auto &[i, c] : args[pos]) {
      idx[pos] = i;
      prefix[pos + 1] = prefix[pos] * c;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return acc;
}

FiniteNLieAlgebra::Constants FiniteNLieAlgebra::constants() const {
  Constants out;
  std::vector<int> idx(static_cast<std::size_t>(arity_));
  for (int i = 0; i < arity_; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (arity_ > dim_) return out;
  SparseVector scratch;
  while (true) {
    const auto &v = bracket(idx, scratch);
    if (!v.empty()) out.emplace(idx, v);
    int p = arity_ - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == dim_ - arity_ + p) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < arity_; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

FiniteNLieAlgebra FiniteNLieAlgebra::with_entry(const std::vector<int> &idx, SparseVector v) const {
  if (!table_) throw ConfigurationError("single-slot mutation needs a tabulated algebra");
  check_vector(v, dim_, field_);
  FiniteNLieAlgebra out = *this;
  auto table = *table_;
  table.at(slot(idx)) = std::move(v);
  out.table_ = std::make_shared<const std::vector<SparseVector>>(std::move(table));
  return out;
}

FiniteNLieAlgebra FiniteNLieAlgebra::with_constant(const std::vector<int> &sorted, const SparseVector &v) const {
  auto c = constants();
  if (v.empty()) c.erase(sorted);
  else c[sorted] = v;
  auto out = from_constants(field_, dim_, arity_, c, labels_);
  out.metadata_ = metadata_;
  return out;
}

std::string FiniteNLieAlgebra::render(const SparseVector &v) const {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[i, c] : v) {
    if (!first) os << " + ";
    first = false;
    if (c.is_one()) os << label(i);
    else os << c.to_string() << '*' << label(i);
  }
  return os.str();
}

} // namespace nlie
