// Regenerates the bundled Cayley-table catalog: every isomorphism type of
// order 1..16, filed as catalog/order<NN>/g<NN>_<id>.cayley. The id follows
// the usual small-group numbering so table rows come out in the familiar
// order. Verifies per-order counts and pairwise non-isomorphism before
// writing anything.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <vector>

#include "subf/catalog.hpp"
#include "subf/group.hpp"
#include "subf/subset.hpp"

using namespace subf;
namespace fs = std::filesystem;

namespace {

struct Planned {
  int order;
  int id;
  std::string name;
  FiniteGroup group;
};

FiniteGroup spec(const std::string& s) { return parse_group_spec(s); }

std::vector<ElementId> identity_action(const FiniteGroup& g) {
  std::vector<ElementId> out(g.order());
  for (int i = 0; i < g.order(); ++i) out[i] = i;
  return out;
}

// (16,3): C4xC2 = <s> x <t> extended by h with h s h = s t, h t h = t.
FiniteGroup make_16_3() {
  FiniteGroup n = spec("C4xC2");
  std::vector<ElementId> alpha(8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) alpha[2 * i + j] = 2 * i + (i + j) % 2;
  return semidirect_product(n, spec("C2"), {identity_action(n), alpha});
}

// (16,13): C4xC2 = <c> x <x> extended by h with h x h = c^2 x, h c h = c.
// The central product of D8 and C4.
FiniteGroup make_16_13() {
  FiniteGroup n = spec("C4xC2");
  std::vector<ElementId> beta(8);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) beta[2 * a + b] = 2 * ((a + 2 * b) % 4) + b;
  return semidirect_product(n, spec("C2"), {identity_action(n), beta});
}

// (16,4): C4 : C4 with the generator acting by inversion.
FiniteGroup make_16_4() {
  FiniteGroup n = spec("C4");
  std::vector<ElementId> invert = {0, 3, 2, 1};
  std::vector<ElementId> id = {0, 1, 2, 3};
  return semidirect_product(n, spec("C4"), {id, invert, id, invert});
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = argc > 1 ? argv[1] : "catalog";

  std::vector<Planned> plan;
  auto add = [&](int order, int id, const std::string& name, FiniteGroup g) {
    g.set_spec(name);
    plan.push_back({order, id, name, std::move(g)});
  };

  add(1, 1, "C1", spec("C1"));
  add(2, 1, "C2", spec("C2"));
  add(3, 1, "C3", spec("C3"));
  add(4, 1, "C4", spec("C4"));
  add(4, 2, "C2xC2", spec("C2xC2"));
  add(5, 1, "C5", spec("C5"));
  add(6, 1, "S3", spec("S3"));
  add(6, 2, "C6", spec("C6"));
  add(7, 1, "C7", spec("C7"));
  add(8, 1, "C8", spec("C8"));
  add(8, 2, "C4xC2", spec("C4xC2"));
  add(8, 3, "D8", spec("D8"));
  add(8, 4, "Q8", spec("Q8"));
  add(8, 5, "C2^3", spec("C2^3"));
  add(9, 1, "C9", spec("C9"));
  add(9, 2, "C3xC3", spec("C3xC3"));
  add(10, 1, "D10", spec("D10"));
  add(10, 2, "C10", spec("C10"));
  add(11, 1, "C11", spec("C11"));
  add(12, 1, "C3:C4", spec("Dic3"));
  add(12, 2, "C12", spec("C12"));
  add(12, 3, "A4", spec("A4"));
  add(12, 4, "D12", spec("D12"));
  add(12, 5, "C6xC2", spec("C6xC2"));
  add(13, 1, "C13", spec("C13"));
  add(14, 1, "D14", spec("D14"));
  add(14, 2, "C14", spec("C14"));
  add(15, 1, "C15", spec("C15"));
  add(16, 1, "C16", spec("C16"));
  add(16, 2, "C4xC4", spec("C4xC4"));
  add(16, 3, "(C4xC2):C2", make_16_3());
  add(16, 4, "C4:C4", make_16_4());
  add(16, 5, "C8xC2", spec("C8xC2"));
  add(16, 6, "C8:C2", spec("M16"));
  add(16, 7, "D16", spec("D16"));
  add(16, 8, "QD16", spec("QD16"));
  add(16, 9, "Q16", spec("Q16"));
  add(16, 10, "C4xC2xC2", spec("C4xC2xC2"));
  add(16, 11, "C2xD8", spec("C2xD8"));
  add(16, 12, "C2xQ8", spec("C2xQ8"));
  add(16, 13, "(C4xC2):C2", make_16_13());
  add(16, 14, "C2^4", spec("C2^4"));

  // Sanity: counts per order, pairwise non-isomorphism within an order.
  for (int n = 1; n <= 16; ++n) {
    std::vector<const Planned*> same;
    for (const auto& p : plan)
      if (p.order == n) same.push_back(&p);
    if (static_cast<int>(same.size()) != kGroupCountByOrder[n]) {
      std::cerr << "order " << n << ": planned " << same.size() << " groups, expected "
                << kGroupCountByOrder[n] << "\n";
      return 1;
    }
    for (std::size_t i = 0; i < same.size(); ++i)
      for (std::size_t j = i + 1; j < same.size(); ++j)
        if (are_isomorphic(same[i]->group, same[j]->group)) {
          std::cerr << "order " << n << ": entries " << same[i]->id << " and " << same[j]->id
                    << " are isomorphic\n";
          return 1;
        }
  }

  auto sanitize = [](const std::string& name) {
    std::string out;
    for (char c : name) {
      if (std::isalnum(static_cast<unsigned char>(c)))
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      else if (!out.empty() && out.back() != '-')
        out.push_back('-');
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
  };

  std::set<std::string> used;
  for (const auto& p : plan) {
    char sub[16];
    std::snprintf(sub, sizeof sub, "order%02d", p.order);
    fs::path dir = fs::path(out_dir) / sub;
    fs::create_directories(dir);
    std::string stem = sanitize(p.name);
    if (!used.insert((std::string(sub) + "/") + stem).second) {
      stem += "-" + std::to_string(p.id);
      used.insert((std::string(sub) + "/") + stem);
    }
    std::ofstream out(dir / (stem + ".cayley"));
    out << "# name: " << p.name << "\n";
    out << "# id: " << p.order << "." << p.id << "\n";
    out << emit_cayley_table(p.group);
  }
  std::cout << "wrote " << plan.size() << " catalog files under " << out_dir << "\n";
  return 0;
}
