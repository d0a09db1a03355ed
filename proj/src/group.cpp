#include "subf/group.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

namespace subf {

namespace {

int checked_order(long long n, std::string_view what) {
  if (n < 1) throw ParseError(std::string(what) + ": order must be positive");
  if (n > kMaxOrder)
    throw OrderLimitError(std::string(what) + ": order " + std::to_string(n) +
                          " exceeds the cap of " + std::to_string(kMaxOrder));
  return static_cast<int>(n);
}

std::string describe_cell(int i, int j) {
  return "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Lookup keys ignore spaces and dots ("a^4.b", "(1, a)").
std::string normalize_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw)
    if (c != ' ' && c != '.') out.push_back(c);
  return out;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(int n, std::vector<std::uint8_t> mul,
                                    std::vector<std::string> names, std::string spec) {
  if (n < 1 || n > kMaxOrder)
    throw OrderLimitError("group order " + std::to_string(n) + " out of range [1," +
                          std::to_string(kMaxOrder) + "]");
  if (mul.size() != static_cast<std::size_t>(n) * n)
    throw TableError(TableError::Kind::not_latin, "table size mismatch");

  // Latin square: every row and column is a permutation of [0,n).
  std::vector<bool> seen(n);
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), false);
    for (int j = 0; j < n; ++j) {
      int v = mul[static_cast<std::size_t>(i) * n + j];
      if (v >= n || seen[v])
        throw TableError(TableError::Kind::not_latin,
                         "row " + std::to_string(i) + " is not a permutation at " +
                             describe_cell(i, j));
      seen[v] = true;
    }
  }
  for (int j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), false);
    for (int i = 0; i < n; ++i) {
      int v = mul[static_cast<std::size_t>(i) * n + j];
      if (seen[v])
        throw TableError(TableError::Kind::not_latin,
                         "column " + std::to_string(j) + " is not a permutation at " +
                             describe_cell(i, j));
      seen[v] = true;
    }
  }

  auto at = [&](int a, int b) { return mul[static_cast<std::size_t>(a) * n + b]; };
  for (int g = 0; g < n; ++g)
    if (at(0, g) != g || at(g, 0) != g)
      throw TableError(TableError::Kind::no_identity, "index 0 is not a two-sided identity");

  std::vector<std::uint8_t> inv(n);
  for (int g = 0; g < n; ++g) {
    int r = -1;
    for (int h = 0; h < n; ++h)
      if (at(g, h) == 0 && at(h, g) == 0) {
        r = h;
        break;
      }
    if (r < 0)
      throw TableError(TableError::Kind::missing_inverse,
                       "element " + std::to_string(g) + " has no two-sided inverse");
    inv[g] = static_cast<std::uint8_t>(r);
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (at(at(a, b), c) != at(a, at(b, c)))
          throw TableError(TableError::Kind::not_associative,
                           "associativity fails at (" + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c) + ")");

  if (names.empty()) {
    names.resize(n);
    for (int i = 0; i < n; ++i) names[i] = std::to_string(i);
  }
  if (names.size() != static_cast<std::size_t>(n))
    throw ParseError("names count does not match order");

  FiniteGroup g;
  g.order_ = n;
  g.mul_ = std::move(mul);
  g.inv_ = std::move(inv);
  g.names_ = std::move(names);
  g.spec_ = std::move(spec);
  for (int i = 0; i < n; ++i) g.name_index_.emplace(normalize_name(g.names_[i]), i);

  g.elem_order_.resize(n);
  for (int e = 0; e < n; ++e) {
    int k = 1, x = e;
    while (x != 0) {
      x = g.mul(x, e);
      ++k;
    }
    g.elem_order_[e] = static_cast<std::uint8_t>(k);
  }

  g.abelian_ = true;
  for (int a = 0; a < n && g.abelian_; ++a)
    for (int b = a + 1; b < n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) {
        g.abelian_ = false;
        break;
      }
  return g;
}

std::uint64_t FiniteGroup::translate_mask(std::uint64_t mask, ElementId g, bool left) const {
  std::uint64_t out = 0;
  while (mask) {
    int x = std::countr_zero(mask);
    mask &= mask - 1;
    out |= std::uint64_t{1} << (left ? mul(g, x) : mul(x, g));
  }
  return out;
}

std::uint64_t FiniteGroup::invert_mask(std::uint64_t mask) const {
  std::uint64_t out = 0;
  while (mask) {
    int x = std::countr_zero(mask);
    mask &= mask - 1;
    out |= std::uint64_t{1} << inv_[x];
  }
  return out;
}

std::optional<ElementId> FiniteGroup::element_by_name(std::string_view token) const {
  std::string t = normalize_name(token);
  if (auto it = name_index_.find(t); it != name_index_.end()) return it->second;
  // Fall back to a plain element index.
  int v = -1;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && p == t.data() + t.size() && v >= 0 && v < order_) return v;
  return std::nullopt;
}

void FiniteGroup::add_alias(std::string_view alias, ElementId id) {
  name_index_.emplace(normalize_name(alias), id);
}

std::string FiniteGroup::table_key() const {
  std::string key;
  key.reserve(mul_.size() + 4);
  key.push_back(static_cast<char>(order_));
  key.append(reinterpret_cast<const char*>(mul_.data()), mul_.size());
  return key;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

namespace {

FiniteGroup make_cyclic(int n) {
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>((i + j) % n);
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = std::to_string(i);
  return FiniteGroup::from_table(n, std::move(mul), std::move(names), "C" + std::to_string(n));
}

// Rotation names "1","a","a^2",... and reflection names "b","ab","a^2b",...
// shared by the dihedral/semidihedral/modular family. Registers "ba^i"-style
// aliases under the pinned convention b*a^i = a^(r*i)*b.
void add_two_generator_names(FiniteGroup& g, int m, int conj_r) {
  for (int i = 0; i < m; ++i) {
    std::string ai = i == 0 ? "" : (i == 1 ? "a" : "a^" + std::to_string(i));
    g.add_alias(ai.empty() ? "1" : ai, i);
    g.add_alias((ai.empty() ? "b" : ai + "b"), m + i);
    // b*a^i = a^(r*i mod m)*b
    int ri = ((conj_r % m) * i % m + m) % m;
    std::string bai = i == 0 ? "b" : (i == 1 ? "ba" : "ba^" + std::to_string(i));
    g.add_alias(bai, m + ri);
  }
}

std::vector<std::string> two_generator_names(int m) {
  std::vector<std::string> names(2 * m);
  for (int i = 0; i < m; ++i) {
    std::string ai = i == 0 ? "1" : (i == 1 ? "a" : "a^" + std::to_string(i));
    names[i] = ai;
    names[m + i] = i == 0 ? "b" : (i == 1 ? "ab" : "a^" + std::to_string(i) + "b");
  }
  return names;
}

// Order-2m group <a,b | a^m = b^2 = 1, b a b^-1 = a^r>; r = -1 dihedral,
// r = 3 / r = 5 at m = 8 give QD16 / M16.
FiniteGroup make_metacyclic2(int m, int r, std::string spec) {
  int n = 2 * m;
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  auto idx = [m](int i, int j) { return i + m * j; };
  auto powr = [&](int j, int k) {  // r^j * k mod m
    long long v = k;
    for (int t = 0; t < j; ++t) v = (v * r) % m;
    return static_cast<int>(((v % m) + m) % m);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < 2; ++l)
          mul[static_cast<std::size_t>(idx(i, j)) * n + idx(k, l)] =
              static_cast<std::uint8_t>(idx((i + powr(j, k)) % m, (j + l) % 2));
  auto g = FiniteGroup::from_table(n, std::move(mul), two_generator_names(m), std::move(spec));
  add_two_generator_names(g, m, r);
  return g;
}

FiniteGroup make_dihedral(int order) {
  return make_metacyclic2(order / 2, -1, "D" + std::to_string(order));
}

// Dicyclic of order 4m: <a,b | a^2m = 1, b^2 = a^m, b a b^-1 = a^-1>.
FiniteGroup make_dicyclic(int m, std::string spec) {
  int n = 4 * m;
  int mm = 2 * m;
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  auto idx = [mm](int i, int j) { return i + mm * j; };
  for (int i = 0; i < mm; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < mm; ++k)
        for (int l = 0; l < 2; ++l) {
          int ii = j == 0 ? (i + k) % mm : ((i - k) % mm + mm) % mm;
          int jj = j + l;
          if (jj == 2) {
            ii = (ii + m) % mm;
            jj = 0;
          }
          mul[static_cast<std::size_t>(idx(i, j)) * n + idx(k, l)] =
              static_cast<std::uint8_t>(idx(ii, jj));
        }
  auto g = FiniteGroup::from_table(n, std::move(mul), two_generator_names(mm), std::move(spec));
  add_two_generator_names(g, mm, -1);
  return g;
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::string cycle_name(const std::vector<int>& p) {
  int n = static_cast<int>(p.size());
  std::vector<bool> seen(n);
  std::string out;
  for (int s = 0; s < n; ++s) {
    if (seen[s] || p[s] == s) continue;
    out.push_back('(');
    int t = s;
    bool first = true;
    while (!seen[t]) {
      seen[t] = true;
      if (!first) out.push_back(',');
      out += std::to_string(t + 1);
      first = false;
      t = p[t];
    }
    out.push_back(')');
  }
  return out.empty() ? "()" : out;
}

FiniteGroup make_permutation_group(int degree, bool even_only, std::string spec) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(degree);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (even_only) {
      auto q = p;
      int s = 1;
      for (int i = 0; i < degree; ++i)
        while (q[i] != i) {
          std::swap(q[i], q[q[i]]);
          s = -s;
        }
      if (s != 1) continue;
    }
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(perms.begin(), perms.end());

  int n = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index[perms[i]] = i;
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  std::vector<int> comp(degree);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int x = 0; x < degree; ++x) comp[x] = perms[i][perms[j][x]];  // apply j, then i
      mul[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(index.at(comp));
    }
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = cycle_name(perms[i]);
  return FiniteGroup::from_table(n, std::move(mul), std::move(names), std::move(spec));
}

bool all_digit_names(const std::vector<std::string>& names, std::size_t width) {
  return std::all_of(names.begin(), names.end(), [&](const std::string& s) {
    return s.size() == width && std::all_of(s.begin(), s.end(), [](unsigned char c) {
             return std::isdigit(c) != 0;
           });
  });
}

}  // namespace

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  long long order = static_cast<long long>(a.order()) * b.order();
  int n = checked_order(order, a.spec() + "x" + b.spec());
  int bn = b.order();
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  for (int g1 = 0; g1 < a.order(); ++g1)
    for (int h1 = 0; h1 < bn; ++h1)
      for (int g2 = 0; g2 < a.order(); ++g2)
        for (int h2 = 0; h2 < bn; ++h2)
          mul[static_cast<std::size_t>(g1 * bn + h1) * n + (g2 * bn + h2)] =
              static_cast<std::uint8_t>(a.mul(g1, g2) * bn + b.mul(h1, h2));

  // Tuples of small cyclic factors concatenate ("01", "110"); anything else
  // gets explicit pairs "(x, y)".
  std::vector<std::string> names(n);
  bool concat = all_digit_names(a.names(), a.names()[0].size()) && all_digit_names(b.names(), 1);
  for (int g = 0; g < a.order(); ++g)
    for (int h = 0; h < bn; ++h)
      names[g * bn + h] = concat ? a.name(g) + b.name(h) : "(" + a.name(g) + ", " + b.name(h) + ")";
  return FiniteGroup::from_table(n, std::move(mul), std::move(names),
                                 a.spec() + "x" + b.spec());
}

FiniteGroup semidirect_product(const FiniteGroup& ng, const FiniteGroup& hg,
                               const std::vector<std::vector<ElementId>>& action) {
  int nn = ng.order(), nh = hg.order();
  if (static_cast<int>(action.size()) != nh)
    throw ActionError(ActionError::Kind::not_homomorphism,
                      "action table must have one permutation per element of H");
  for (int h = 0; h < nh; ++h) {
    const auto& p = action[h];
    if (static_cast<int>(p.size()) != nn)
      throw ActionError(ActionError::Kind::not_automorphism, "action permutation size mismatch");
    std::vector<bool> seen(nn);
    for (int x : p) {
      if (x < 0 || x >= nn || seen[x])
        throw ActionError(ActionError::Kind::not_automorphism,
                          "action[" + std::to_string(h) + "] is not a bijection");
      seen[x] = true;
    }
    if (p[0] != 0)
      throw ActionError(ActionError::Kind::not_automorphism,
                        "action[" + std::to_string(h) + "] does not fix the identity");
    for (int x = 0; x < nn; ++x)
      for (int y = 0; y < nn; ++y)
        if (p[ng.mul(x, y)] != ng.mul(p[x], p[y]))
          throw ActionError(ActionError::Kind::not_automorphism,
                            "action[" + std::to_string(h) + "] is not an automorphism");
  }
  for (int h1 = 0; h1 < nh; ++h1)
    for (int h2 = 0; h2 < nh; ++h2) {
      const auto& lhs = action[hg.mul(h1, h2)];
      for (int x = 0; x < nn; ++x)
        if (lhs[x] != action[h1][action[h2][x]])
          throw ActionError(ActionError::Kind::not_homomorphism,
                            "action is not a homomorphism at (" + std::to_string(h1) + "," +
                                std::to_string(h2) + ")");
    }

  int n = checked_order(static_cast<long long>(nn) * nh, ng.spec() + ":" + hg.spec());
  std::vector<std::uint8_t> mul(static_cast<std::size_t>(n) * n);
  for (int a1 = 0; a1 < nn; ++a1)
    for (int h1 = 0; h1 < nh; ++h1)
      for (int a2 = 0; a2 < nn; ++a2)
        for (int h2 = 0; h2 < nh; ++h2)
          mul[static_cast<std::size_t>(a1 * nh + h1) * n + (a2 * nh + h2)] =
              static_cast<std::uint8_t>(ng.mul(a1, action[h1][a2]) * nh + hg.mul(h1, h2));
  std::vector<std::string> names(n);
  for (int a = 0; a < nn; ++a)
    for (int h = 0; h < nh; ++h) names[a * nh + h] = "(" + ng.name(a) + ", " + hg.name(h) + ")";
  return FiniteGroup::from_table(n, std::move(mul), std::move(names),
                                 ng.spec() + ":" + hg.spec());
}

// ---------------------------------------------------------------------------
// Group-spec DSL
// ---------------------------------------------------------------------------

namespace {

FiniteGroup parse_atom(std::string_view atom) {
  auto num_after = [&](std::size_t prefix) -> long long {
    long long v = -1;
    auto* begin = atom.data() + prefix;
    auto* end = atom.data() + atom.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) throw ParseError("unknown atom '" + std::string(atom) + "'");
    return v;
  };
  if (atom == "QD16") return make_metacyclic2(8, 3, "QD16");
  if (atom == "M16") return make_metacyclic2(8, 5, "M16");
  if (atom == "Q8") return make_dicyclic(2, "Q8");
  if (atom == "Q16") return make_dicyclic(4, "Q16");
  if (atom.size() >= 4 && atom.substr(0, 3) == "Dic") {
    long long m = num_after(3);
    checked_order(4 * m, atom);
    return make_dicyclic(static_cast<int>(m), std::string(atom));
  }
  if (atom.size() >= 2 && atom[0] == 'C') return make_cyclic(checked_order(num_after(1), atom));
  if (atom.size() >= 2 && atom[0] == 'D') {
    long long o = num_after(1);
    if (o < 2 || o % 2 != 0)
      throw ParseError("dihedral atom '" + std::string(atom) + "' needs an even order >= 2");
    checked_order(o, atom);
    return make_dihedral(static_cast<int>(o));
  }
  if (atom.size() >= 2 && (atom[0] == 'S' || atom[0] == 'A')) {
    long long d = num_after(1);
    if (d < 1 || d > 8) throw ParseError("unsupported degree in '" + std::string(atom) + "'");
    bool alternating = atom[0] == 'A';
    long long ord = factorial(static_cast<int>(d));
    if (alternating && d >= 2) ord /= 2;
    checked_order(ord, atom);
    return make_permutation_group(static_cast<int>(d), alternating, std::string(atom));
  }
  throw ParseError("unknown atom '" + std::string(atom) + "'");
}

}  // namespace

FiniteGroup parse_group_spec(std::string_view spec) {
  // Tokenize on 'x' at top level; terms are ATOM or ATOM^k.
  std::string compact;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  if (compact.empty()) throw ParseError("empty group spec");

  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= compact.size(); ++i) {
    if (i == compact.size() || compact[i] == 'x') {
      if (i == start) throw ParseError("empty term in group spec '" + compact + "'");
      terms.push_back(compact.substr(start, i - start));
      start = i + 1;
    }
  }

  std::optional<FiniteGroup> result;
  for (const auto& term : terms) {
    std::string atom = term;
    int power = 1;
    if (auto caret = term.find('^'); caret != std::string::npos) {
      atom = term.substr(0, caret);
      auto exp = term.substr(caret + 1);
      auto [p, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), power);
      if (ec != std::errc() || p != exp.data() + exp.size() || power < 1)
        throw ParseError("bad exponent in '" + term + "'");
    }
    FiniteGroup base = parse_atom(atom);
    for (int k = 0; k < power; ++k) {
      if (result)
        result = direct_product(*result, base);
      else
        result = base;
    }
  }
  result->set_spec(compact);
  return std::move(*result);
}

// ---------------------------------------------------------------------------
// Cayley-table file format
// ---------------------------------------------------------------------------

FiniteGroup load_cayley_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<std::string> names;
  std::vector<std::uint8_t> mul;
  int rows = 0;

  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      auto hash = out.find('#');
      if (hash != std::string::npos) out.erase(hash);
      auto only_ws = out.find_first_not_of(" \t\r\n");
      if (only_ws != std::string::npos) return true;
    }
    return false;
  };

  while (next_content_line(line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (n < 0) {
      if (word != "order") throw ParseError("expected 'order n' on the first line");
      long long v;
      if (!(ls >> v)) throw ParseError("missing order value");
      if (v > kMaxOrder || v < 1)
        throw OrderLimitError("table order " + std::to_string(v) + " out of range");
      n = static_cast<int>(v);
      mul.reserve(static_cast<std::size_t>(n) * n);
      continue;
    }
    if (word == "names" && names.empty() && rows == 0) {
      std::string rest;
      std::getline(ls, rest);
      // Comma-separated, but commas inside parentheses belong to the name
      // (permutation and tuple names).
      std::string tok;
      int depth = 0;
      auto flush = [&] {
        auto b = tok.find_first_not_of(" \t");
        auto e = tok.find_last_not_of(" \t");
        names.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
        tok.clear();
      };
      for (char c : rest) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
          flush();
          continue;
        }
        tok.push_back(c);
      }
      flush();
      if (static_cast<int>(names.size()) != n)
        throw ParseError("names line must list exactly " + std::to_string(n) + " tokens");
      continue;
    }
    // A table row.
    std::istringstream rs(line);
    long long v;
    int count = 0;
    while (rs >> v) {
      if (v < 0 || v >= n) throw ParseError("table entry " + std::to_string(v) + " out of range");
      mul.push_back(static_cast<std::uint8_t>(v));
      ++count;
    }
    if (count != n) throw ParseError("table row has " + std::to_string(count) +
                                     " entries, expected " + std::to_string(n));
    ++rows;
  }
  if (n < 0) throw ParseError("empty Cayley table");
  if (rows != n) throw ParseError("expected " + std::to_string(n) + " table rows, got " +
                                  std::to_string(rows));

  // Find the two-sided identity, then re-index it to 0 by swapping labels.
  auto at = [&](int a, int b) { return mul[static_cast<std::size_t>(a) * n + b]; };

  // Latin-square check first so the identity scan reports the right defect.
  {
    std::vector<bool> seen(n);
    for (int i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), false);
      for (int j = 0; j < n; ++j) {
        if (seen[at(i, j)])
          throw TableError(TableError::Kind::not_latin,
                           "row " + std::to_string(i) + " repeats a value");
        seen[at(i, j)] = true;
      }
      std::fill(seen.begin(), seen.end(), false);
      for (int j = 0; j < n; ++j) {
        if (seen[at(j, i)])
          throw TableError(TableError::Kind::not_latin,
                           "column " + std::to_string(i) + " repeats a value");
        seen[at(j, i)] = true;
      }
    }
  }

  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n; ++g)
      if (at(e, g) != g || at(g, e) != g) {
        ok = false;
        break;
      }
    if (ok) identity = e;
  }
  if (identity < 0) throw TableError(TableError::Kind::no_identity, "no two-sided identity");

  std::vector<int> perm(n);  // old index -> new index
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[identity]);

  std::vector<std::uint8_t> remul(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      remul[static_cast<std::size_t>(perm[a]) * n + perm[b]] =
          static_cast<std::uint8_t>(perm[at(a, b)]);
  std::vector<std::string> renames;
  if (!names.empty()) {
    renames.resize(n);
    for (int i = 0; i < n; ++i) renames[perm[i]] = names[i];
  }
  return FiniteGroup::from_table(n, std::move(remul), std::move(renames), "cayley");
}

std::string emit_cayley_table(const FiniteGroup& g) {
  std::ostringstream out;
  out << "order " << g.order() << "\n";
  out << "names ";
  for (int i = 0; i < g.order(); ++i) out << (i ? "," : "") << g.name(i);
  out << "\n";
  for (int i = 0; i < g.order(); ++i) {
    for (int j = 0; j < g.order(); ++j) out << (j ? " " : "") << g.mul(i, j);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism (orders <= 16 by intent)
// ---------------------------------------------------------------------------

namespace {

// Multiset of element orders plus center size; cheap non-isomorphism filter.
std::vector<int> invariant_profile(const FiniteGroup& g) {
  std::vector<int> prof;
  for (int e = 0; e < g.order(); ++e) prof.push_back(g.element_order(e));
  std::sort(prof.begin(), prof.end());
  int center = 0;
  for (int z = 0; z < g.order(); ++z) {
    bool central = true;
    for (int x = 0; x < g.order() && central; ++x) central = g.mul(z, x) == g.mul(x, z);
    if (central) ++center;
  }
  prof.push_back(center);
  // central element orders distinguish e.g. the two order-16 groups that share
  // an order profile
  for (int z = 0; z < g.order(); ++z) {
    bool central = true;
    for (int x = 0; x < g.order() && central; ++x) central = g.mul(z, x) == g.mul(x, z);
    if (central) prof.push_back(100 + g.element_order(z));
  }
  std::sort(prof.begin(), prof.end());
  return prof;
}

std::uint64_t closure_mask(const FiniteGroup& g, std::uint64_t seed) {
  std::uint64_t cur = seed | 1;
  for (;;) {
    std::uint64_t next = cur;
    std::uint64_t xs = cur;
    while (xs) {
      int x = std::countr_zero(xs);
      xs &= xs - 1;
      std::uint64_t ys = cur;
      while (ys) {
        int y = std::countr_zero(ys);
        ys &= ys - 1;
        next |= std::uint64_t{1} << g.mul(x, y);
      }
    }
    if (next == cur) return cur;
    cur = next;
  }
}

struct IsoSearch {
  const FiniteGroup& g;
  const FiniteGroup& h;
  std::vector<int> gens;                 // generating sequence of g
  std::vector<ElementId> map;            // g -> h, -1 unknown
  std::vector<char> used;                // image used in h
  std::vector<std::vector<int>> words;   // elements of g in closure order: (prev, gen)

  bool extend(std::size_t gi) {
    if (gi == gens.size()) return true;
    int gen = gens[gi];
    for (int img = 0; img < h.order(); ++img) {
      if (used[img] || h.element_order(img) != g.element_order(gen)) continue;
      auto saved_map = map;
      auto saved_used = used;
      map[gen] = img;
      used[img] = 1;
      if (close_consistent() && extend(gi + 1)) return true;
      map = saved_map;
      used = saved_used;
    }
    return false;
  }

  // Deduce images of all products of mapped elements; detect conflicts.
  bool close_consistent() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < g.order(); ++a) {
        if (map[a] < 0) continue;
        for (int b = 0; b < g.order(); ++b) {
          if (map[b] < 0) continue;
          int ab = g.mul(a, b);
          int image = h.mul(map[a], map[b]);
          if (map[ab] < 0) {
            if (used[image]) return false;
            map[ab] = image;
            used[image] = 1;
            changed = true;
          } else if (map[ab] != image) {
            return false;
          }
        }
      }
    }
    return true;
  }
};

}  // namespace

std::optional<std::vector<ElementId>> find_isomorphism(const FiniteGroup& g,
                                                       const FiniteGroup& h) {
  if (g.order() != h.order()) return std::nullopt;
  if (g.order() == 1) return std::vector<ElementId>{0};
  if (invariant_profile(g) != invariant_profile(h)) return std::nullopt;

  // Greedy generating sequence: extend the span with the lowest outside element.
  std::vector<int> gens;
  std::uint64_t span = 1;
  while (span != g.full_mask()) {
    int x = std::countr_zero(~span & g.full_mask());
    gens.push_back(x);
    span = closure_mask(g, span | (std::uint64_t{1} << x));
  }

  IsoSearch search{g, h, gens, std::vector<ElementId>(g.order(), -1),
                   std::vector<char>(h.order(), 0), {}};
  search.map[0] = 0;
  search.used[0] = 1;
  if (!search.extend(0)) return std::nullopt;
  return search.map;
}

bool are_isomorphic(const FiniteGroup& g, const FiniteGroup& h) {
  return find_isomorphism(g, h).has_value();
}

}  // namespace subf
