#include "hsplab/groups.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <string>

#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"

namespace hsplab {

namespace {

using Row = std::vector<std::int64_t>;

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error("integer overflow in lattice reduction");
  }
  return static_cast<std::int64_t>(v);
}

// row -= q * other
void axpy(Row& row, std::int64_t q, const Row& other) {
  if (q == 0) return;
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = checked(static_cast<__int128>(row[j]) -
                     static_cast<__int128>(q) * other[j]);
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool is_zero(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](std::int64_t v) { return v == 0; });
}

std::vector<Row> coords_of(std::span<const GroupElement> gens) {
  std::vector<Row> out;
  out.reserve(gens.size());
  for (const auto& g : gens) out.push_back(g.coords);
  return out;
}

void check_element(const GroupSpec& spec, const GroupElement& e) {
  if (e.coords.size() != spec.rank()) {
    throw DimensionMismatch("element length does not match group rank");
  }
}

}  // namespace

GroupSpec::GroupSpec(std::vector<std::uint64_t> m) : moduli(std::move(m)) {
  for (const auto d : moduli) {
    if (d == 0) throw InvalidArgument("group modulus must be >= 1");
    if (d > kMaxModulus) throw InvalidArgument("group modulus exceeds 2^31");
  }
}

std::uint64_t GroupSpec::order() const {
  unsigned __int128 n = 1;
  for (const auto d : moduli) {
    n *= d;
    if (n > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
      throw InvalidArgument("group order overflows");
    }
  }
  return static_cast<std::uint64_t>(n);
}

std::optional<PrimePowerForm> prime_power_form(const GroupSpec& spec) {
  PrimePowerForm form;
  std::optional<std::uint64_t> prime;
  for (const auto d : spec.moduli) {
    if (d == 1) {
      form.exponents.push_back(0);
      continue;
    }
    const auto root = prime_power_root(d);
    if (!root) return std::nullopt;
    if (prime && *prime != root->first) return std::nullopt;
    prime = root->first;
    form.exponents.push_back(root->second);
  }
  if (!std::is_sorted(form.exponents.begin(), form.exponents.end())) {
    return std::nullopt;
  }
  form.prime = prime.value_or(2);
  form.max_exponent = form.exponents.empty() ? 0 : form.exponents.back();
  form.top_modulus = ipow(form.prime, form.max_exponent);
  return form;
}

GroupElement make_element(const GroupSpec& spec, std::vector<std::int64_t> raw) {
  if (raw.size() != spec.rank()) {
    throw DimensionMismatch("element length does not match group rank");
  }
  for (std::size_t j = 0; j < raw.size(); ++j) {
    raw[j] = mod_floor(raw[j], static_cast<std::int64_t>(spec.moduli[j]));
  }
  return GroupElement{std::move(raw)};
}

GroupElement zero_element(const GroupSpec& spec) {
  return GroupElement{Row(spec.rank(), 0)};
}

GroupElement add(const GroupSpec& spec, const GroupElement& a,
                 const GroupElement& b) {
  check_element(spec, a);
  check_element(spec, b);
  Row out(spec.rank());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.coords[j] + b.coords[j];
  return make_element(spec, std::move(out));
}

GroupElement negate(const GroupSpec& spec, const GroupElement& a) {
  check_element(spec, a);
  Row out(spec.rank());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -a.coords[j];
  return make_element(spec, std::move(out));
}

GroupElement scale(const GroupSpec& spec, const GroupElement& a,
                   std::int64_t k) {
  check_element(spec, a);
  Row out(spec.rank());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto d = static_cast<std::int64_t>(spec.moduli[j]);
    out[j] = checked(static_cast<__int128>(mod_floor(k, d)) * a.coords[j] % d);
  }
  return make_element(spec, std::move(out));
}

GroupElement unit_vector(const GroupSpec& spec, std::size_t j) {
  Row raw(spec.rank(), 0);
  raw.at(j) = 1;
  return make_element(spec, std::move(raw));
}

std::uint64_t element_index(const GroupSpec& spec, const GroupElement& e) {
  check_element(spec, e);
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < spec.rank(); ++j) {
    idx = idx * spec.moduli[j] + static_cast<std::uint64_t>(e.coords[j]);
  }
  return idx;
}

GroupElement element_at(const GroupSpec& spec, std::uint64_t index) {
  Row coords(spec.rank());
  for (std::size_t j = spec.rank(); j-- > 0;) {
    coords[j] = static_cast<std::int64_t>(index % spec.moduli[j]);
    index /= spec.moduli[j];
  }
  return GroupElement{std::move(coords)};
}

// ---------------------------------------------------------------------------
// HermiteLattice

HermiteLattice::HermiteLattice(std::vector<std::uint64_t> moduli,
                               std::span<const std::vector<std::int64_t>> generators)
    : moduli_(std::move(moduli)) {
  const std::size_t l = moduli_.size();
  rows_.assign(l, Row{});
  pivots_.assign(l, 0);

  auto reduce_tail = [&](Row& r, std::size_t from) {
    for (std::size_t j = from; j < l; ++j) {
      if (moduli_[j] > 0) {
        r[j] = mod_floor(r[j], static_cast<std::int64_t>(moduli_[j]));
      }
    }
  };

  std::vector<Row> work;
  for (const auto& g : generators) {
    if (g.size() != l) throw DimensionMismatch("generator length mismatch");
    Row r = g;
    reduce_tail(r, 0);
    if (!is_zero(r)) work.push_back(std::move(r));
  }

  for (std::size_t c = 0; c < l; ++c) {
    // The relation d_c e_c joins the pool only now, so the reductions modulo
    // d_j for j > c below always have their relation row available.
    if (moduli_[c] > 0) {
      Row r(l, 0);
      r[c] = static_cast<std::int64_t>(moduli_[c]);
      work.push_back(std::move(r));
    }
    std::optional<std::size_t> best;
    while (true) {
      best.reset();
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (work[i][c] == 0) continue;
        if (!best || std::abs(work[i][c]) < std::abs(work[*best][c])) best = i;
      }
      if (!best) break;
      bool others = false;
      for (std::size_t i = 0; i < work.size(); ++i) {
        if (i == *best || work[i][c] == 0) continue;
        axpy(work[i], work[i][c] / work[*best][c], work[*best]);
        others = others || work[i][c] != 0;
      }
      if (!others) break;
    }
    if (best) {
      Row p = std::move(work[*best]);
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(*best));
      if (p[c] < 0) {
        for (auto& v : p) v = -v;
      }
      reduce_tail(p, c + 1);
      for (std::size_t prev = 0; prev < c; ++prev) {
        if (rows_[prev].empty()) continue;
        axpy(rows_[prev], floor_div(rows_[prev][c], p[c]), p);
        reduce_tail(rows_[prev], c + 1);
      }
      pivots_[c] = p[c];
      rows_[c] = std::move(p);
    }
    for (auto& w : work) reduce_tail(w, c + 1);
    std::erase_if(work, is_zero);
  }
}

bool HermiteLattice::full_rank() const {
  return std::all_of(pivots_.begin(), pivots_.end(),
                     [](std::int64_t p) { return p > 0; });
}

std::vector<std::int64_t> HermiteLattice::reduce(
    std::span<const std::int64_t> x) const {
  if (x.size() != moduli_.size()) {
    throw DimensionMismatch("vector length does not match lattice dimension");
  }
  Row r(x.begin(), x.end());
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (pivots_[c] == 0) continue;
    axpy(r, floor_div(r[c], pivots_[c]), rows_[c]);
  }
  return r;
}

bool HermiteLattice::contains(std::span<const std::int64_t> x) const {
  return is_zero(reduce(x));
}

std::uint64_t HermiteLattice::index() const {
  if (!full_rank()) throw InvalidArgument("lattice has infinite index");
  std::uint64_t n = 1;
  for (const auto p : pivots_) n *= static_cast<std::uint64_t>(p);
  return n;
}

std::uint64_t HermiteLattice::coset_index(std::span<const std::int64_t> x) const {
  if (!full_rank()) throw InvalidArgument("lattice has infinite index");
  const Row r = reduce(x);
  std::uint64_t idx = 0;
  for (std::size_t c = 0; c < r.size(); ++c) {
    idx = idx * static_cast<std::uint64_t>(pivots_[c]) +
          static_cast<std::uint64_t>(r[c]);
  }
  return idx;
}

std::vector<std::int64_t> HermiteLattice::coset_representative(
    std::uint64_t index) const {
  if (!full_rank()) throw InvalidArgument("lattice has infinite index");
  Row r(moduli_.size());
  for (std::size_t c = r.size(); c-- > 0;) {
    const auto p = static_cast<std::uint64_t>(pivots_[c]);
    r[c] = static_cast<std::int64_t>(index % p);
    index /= p;
  }
  return r;
}

std::vector<std::vector<std::int64_t>> HermiteLattice::canonical_generators()
    const {
  std::vector<Row> out;
  for (std::size_t c = 0; c < rows_.size(); ++c) {
    if (rows_[c].empty()) continue;
    Row r = rows_[c];
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (moduli_[j] > 0) {
        r[j] = mod_floor(r[j], static_cast<std::int64_t>(moduli_[j]));
      }
    }
    if (!is_zero(r)) out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coprime split

CoprimeSplit::CoprimeSplit(GroupSpec original,
                           std::vector<PrimeComponent> components)
    : original_(std::move(original)), components_(std::move(components)) {}

std::vector<GroupElement> CoprimeSplit::project(const GroupElement& x) const {
  check_element(original_, x);
  std::vector<GroupElement> parts;
  for (const auto& comp : components_) {
    Row coords(comp.spec.rank());
    for (std::size_t c = 0; c < coords.size(); ++c) {
      coords[c] = mod_floor(x.coords[comp.source_factor[c]],
                            static_cast<std::int64_t>(comp.spec.moduli[c]));
    }
    parts.push_back(GroupElement{std::move(coords)});
  }
  return parts;
}

GroupElement CoprimeSplit::embed(std::size_t component,
                                 const GroupElement& y) const {
  const auto& comp = components_.at(component);
  check_element(comp.spec, y);
  Row raw(original_.rank(), 0);
  for (std::size_t c = 0; c < y.coords.size(); ++c) {
    const std::size_t i = comp.source_factor[c];
    const std::uint64_t d = original_.moduli[i];
    const std::uint64_t pe = comp.spec.moduli[c];
    const std::uint64_t cofactor = d / pe;
    // cofactor * (cofactor^{-1} mod p^e) is 1 mod p^e and 0 mod cofactor.
    const std::uint64_t idem =
        mul_mod(cofactor, inverse_mod(cofactor % pe, pe).value(), d);
    raw[i] = static_cast<std::int64_t>(
        mul_mod(static_cast<std::uint64_t>(y.coords[c]), idem, d));
  }
  return make_element(original_, std::move(raw));
}

GroupElement CoprimeSplit::combine(std::span<const GroupElement> parts) const {
  if (parts.size() != components_.size()) {
    throw DimensionMismatch("one part per prime component required");
  }
  GroupElement acc = zero_element(original_);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    acc = add(original_, acc, embed(k, parts[k]));
  }
  return acc;
}

CoprimeSplit coprime_split(const GroupSpec& spec) {
  std::map<std::uint64_t, std::vector<std::pair<unsigned, std::size_t>>> by_prime;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    if (spec.moduli[i] == 0) throw InvalidArgument("modulus 0 cannot be split");
    for (const auto& [p, e] : factorize(spec.moduli[i])) {
      by_prime[p].emplace_back(e, i);
    }
  }
  std::vector<PrimeComponent> comps;
  for (auto& [p, parts] : by_prime) {
    std::stable_sort(parts.begin(), parts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    PrimeComponent comp;
    comp.prime = p;
    std::vector<std::uint64_t> moduli;
    for (const auto& [e, i] : parts) {
      moduli.push_back(ipow(p, e));
      comp.source_factor.push_back(i);
    }
    comp.spec = GroupSpec(std::move(moduli));
    comps.push_back(std::move(comp));
  }
  return CoprimeSplit(spec, std::move(comps));
}

// ---------------------------------------------------------------------------
// Subgroups

std::set<GroupElement> subgroup_enumerate(const SubgroupGenerators& k,
                                          std::size_t cap) {
  const auto& spec = k.spec;
  std::set<GroupElement> seen{zero_element(spec)};
  std::deque<GroupElement> frontier{zero_element(spec)};
  std::vector<GroupElement> gens;
  for (const auto& g : k.gens) {
    check_element(spec, g);
    gens.push_back(make_element(spec, g.coords));
  }
  while (!frontier.empty()) {
    const GroupElement x = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      GroupElement y = add(spec, x, g);
      if (seen.insert(y).second) {
        if (seen.size() > cap) {
          throw DimensionCapExceeded("subgroup larger than enumeration cap");
        }
        frontier.push_back(std::move(y));
      }
    }
  }
  return seen;
}

SubgroupGenerators canonical_subgroup(const SubgroupGenerators& k) {
  const HermiteLattice lattice(k.spec.moduli, coords_of(k.gens));
  SubgroupGenerators out{k.spec, {}};
  for (auto& g : lattice.canonical_generators()) {
    out.gens.push_back(GroupElement{std::move(g)});
  }
  return out;
}

std::uint64_t subgroup_order(const SubgroupGenerators& k) {
  const HermiteLattice lattice(k.spec.moduli, coords_of(k.gens));
  return k.spec.order() / lattice.index();
}

bool subgroup_contains(const SubgroupGenerators& k, const GroupElement& x) {
  check_element(k.spec, x);
  const HermiteLattice lattice(k.spec.moduli, coords_of(k.gens));
  return lattice.contains(x.coords);
}

bool subgroups_equal(const SubgroupGenerators& a, const SubgroupGenerators& b) {
  if (!(a.spec == b.spec)) return false;
  return canonical_subgroup(a).gens == canonical_subgroup(b).gens;
}

std::vector<SubgroupGenerators> all_subgroups(const GroupSpec& spec,
                                              std::size_t cap) {
  const std::uint64_t n = spec.order();
  if (n > cap) throw DimensionCapExceeded("group too large to enumerate subgroups");
  std::set<std::vector<GroupElement>> seen;
  std::vector<SubgroupGenerators> out;
  std::deque<SubgroupGenerators> queue;
  const SubgroupGenerators trivial{spec, {}};
  seen.insert(trivial.gens);
  out.push_back(trivial);
  queue.push_back(trivial);
  while (!queue.empty()) {
    const SubgroupGenerators s = std::move(queue.front());
    queue.pop_front();
    const HermiteLattice lattice(spec.moduli, coords_of(s.gens));
    for (std::uint64_t idx = 0; idx < n; ++idx) {
      const GroupElement g = element_at(spec, idx);
      if (lattice.contains(g.coords)) continue;
      SubgroupGenerators bigger = s;
      bigger.gens.push_back(g);
      bigger = canonical_subgroup(bigger);
      if (seen.insert(bigger.gens).second) {
        out.push_back(bigger);
        queue.push_back(std::move(bigger));
      }
    }
  }
  return out;
}

namespace {

void partitions(unsigned n, unsigned max_part, std::vector<unsigned>& current,
                std::vector<std::vector<unsigned>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (unsigned part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions(n - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("group order must be positive");
  if (n == 1) return {GroupSpec({1})};
  // Cartesian product over primes of partitions (descending parts).
  std::vector<std::vector<std::uint64_t>> partial{{}};
  for (const auto& [p, e] : factorize(n)) {
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> scratch;
    partitions(e, e, scratch, parts);
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& factors : partial) {
      for (const auto& lambda : parts) {
        // factors are invariant factors, largest first
        std::vector<std::uint64_t> merged(std::max(factors.size(), lambda.size()), 1);
        for (std::size_t i = 0; i < factors.size(); ++i) merged[i] = factors[i];
        for (std::size_t i = 0; i < lambda.size(); ++i) merged[i] *= ipow(p, lambda[i]);
        next.push_back(std::move(merged));
      }
    }
    partial = std::move(next);
  }
  std::vector<GroupSpec> out;
  for (auto& f : partial) {
    std::reverse(f.begin(), f.end());
    out.emplace_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characters

bool satisfies_character_relation(const GroupSpec& spec,
                                  std::span<const std::int64_t> t,
                                  std::span<const std::int64_t> h) {
  if (t.size() != spec.rank() || h.size() != spec.rank()) {
    throw DimensionMismatch("character relation arity mismatch");
  }
  std::uint64_t big = 1;
  for (const auto d : spec.moduli) big = lcm_u64(big, d);
  const auto L = static_cast<std::int64_t>(big);
  __int128 acc = 0;
  for (std::size_t j = 0; j < spec.rank(); ++j) {
    const auto w = static_cast<std::int64_t>(big / spec.moduli[j]);
    acc += static_cast<__int128>(w) * mod_floor(h[j], L) % L *
           mod_floor(t[j], L);
    acc %= L;
  }
  return acc == 0;
}

std::vector<std::vector<std::int64_t>> character_group(const SubgroupGenerators& k) {
  const auto& spec = k.spec;
  std::vector<Row> out;
  const std::uint64_t n = spec.order();
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const GroupElement t = element_at(spec, idx);
    bool ok = true;
    for (const auto& h : k.gens) {
      if (!satisfies_character_relation(spec, t.coords, h.coords)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(t.coords);
  }
  return out;
}

namespace {

unsigned valuation(std::int64_t a, std::int64_t p) {
  unsigned v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

}  // namespace

SubgroupGenerators character_kernel(std::span<const CharacterSample> samples,
                                    const GroupSpec& spec) {
  const auto form = prime_power_form(spec);
  if (!form) throw InvalidArgument("character_kernel needs a prime-power group");
  const std::size_t l = spec.rank();
  const auto p = static_cast<std::int64_t>(form->prime);
  const auto q = static_cast<std::int64_t>(form->top_modulus);
  const unsigned m = form->max_exponent;
  if (q == 1) return SubgroupGenerators{spec, {}};

  auto mulq = [q](std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
  };

  // Relation matrix over Z_{p^m}: A[i][j] = p^{m - m_j} t_ij.
  std::vector<Row> a;
  for (const auto& s : samples) {
    if (!(s.spec == spec)) throw InvalidArgument("sample group mismatch");
    if (s.t.size() != l) throw DimensionMismatch("sample length mismatch");
    Row r(l);
    for (std::size_t j = 0; j < l; ++j) {
      const auto dj = static_cast<std::int64_t>(spec.moduli[j]);
      if (s.t[j] < 0 || s.t[j] >= dj) {
        throw InvalidArgument("character coordinate out of range");
      }
      r[j] = mulq(q / dj, s.t[j]);
    }
    a.push_back(std::move(r));
  }
  // Column operations are mirrored in c so that kernel(A) = c * kernel(D).
  std::vector<Row> c(l, Row(l, 0));
  for (std::size_t j = 0; j < l; ++j) c[j][j] = 1;
  auto col_axpy = [&](std::vector<Row>& mat, std::size_t dst, std::int64_t f,
                      std::size_t src) {
    for (auto& r : mat) r[dst] = mod_floor(r[dst] - mulq(f, r[src]), q);
  };
  auto col_scale = [&](std::vector<Row>& mat, std::size_t col, std::int64_t f) {
    for (auto& r : mat) r[col] = mulq(r[col], f);
  };
  auto col_swap = [](std::vector<Row>& mat, std::size_t x, std::size_t y) {
    for (auto& r : mat) std::swap(r[x], r[y]);
  };

  std::vector<unsigned> pivot_valuation;
  const std::size_t rows = a.size();
  for (std::size_t k = 0; k < std::min(rows, l); ++k) {
    // Pivot of minimal p-adic valuation: every other entry in its row and
    // column is then a multiple of it.
    std::optional<std::pair<std::size_t, std::size_t>> at;
    unsigned best = m;
    for (std::size_t i = k; i < rows; ++i) {
      for (std::size_t j = k; j < l; ++j) {
        if (a[i][j] == 0) continue;
        const unsigned v = valuation(a[i][j], p);
        if (!at || v < best) {
          at = {i, j};
          best = v;
        }
      }
    }
    if (!at) break;
    std::swap(a[k], a[at->first]);
    col_swap(a, k, at->second);
    col_swap(c, k, at->second);
    const std::int64_t pe = static_cast<std::int64_t>(ipow(form->prime, best));
    const std::int64_t unit = a[k][k] / pe;
    const auto unit_inv = static_cast<std::int64_t>(
        inverse_mod(static_cast<std::uint64_t>(unit), static_cast<std::uint64_t>(q)).value());
    col_scale(a, k, unit_inv);
    col_scale(c, k, unit_inv);
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (a[i][k] == 0) continue;
      const std::int64_t f = a[i][k] / pe;
      for (std::size_t j = 0; j < l; ++j) a[i][j] = mod_floor(a[i][j] - mulq(f, a[k][j]), q);
    }
    for (std::size_t j = k + 1; j < l; ++j) {
      if (a[k][j] == 0) continue;
      const std::int64_t f = a[k][j] / pe;
      col_axpy(a, j, f, k);
      col_axpy(c, j, f, k);
    }
    pivot_valuation.push_back(best);
  }

  SubgroupGenerators out{spec, {}};
  for (std::size_t k = 0; k < l; ++k) {
    const std::int64_t mult =
        k < pivot_valuation.size()
            ? static_cast<std::int64_t>(ipow(form->prime, m - pivot_valuation[k]))
            : 1;
    Row g(l);
    for (std::size_t j = 0; j < l; ++j) g[j] = mulq(c[j][k], mult);
    out.gens.push_back(make_element(spec, std::move(g)));
  }
  return canonical_subgroup(out);
}

bool spans_full_character_group(std::span<const CharacterSample> samples,
                                const GroupSpec& spec,
                                const SubgroupGenerators& planted) {
  return subgroups_equal(character_kernel(samples, spec), planted);
}

}  // namespace hsplab
