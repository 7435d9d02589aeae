// The triangle and the star K_{1,3} are different 2-covers of [3] with the
// same line graph; the paw and the diamond show the same effect on [4].
#include <iostream>

#include "cover_census/cover_census.hpp"

namespace {

void print(const cover_census::TwoCover& cover) {
  std::cout << '{';
  for (const auto& block : cover.blocks()) {
    std::cout << '{';
    for (std::size_t i = 0; i < block.size(); ++i) std::cout << (i ? "," : "") << block[i];
    std::cout << '}';
  }
  std::cout << '}';
}

void print(const cover_census::LabeledGraph& g) {
  for (cover_census::Element a = 1; a <= g.vertex_count(); ++a)
    for (cover_census::Element b = a + 1; b <= g.vertex_count(); ++b)
      if (g.adjacent(a, b)) std::cout << ' ' << a << '-' << b;
}

}  // namespace

int main() {
  using namespace cover_census;
  const TwoCover triangle(3, {{1, 2}, {1, 3}, {2, 3}});
  const TwoCover star(3, {{1, 2, 3}, {1}, {2}, {3}});
  for (const auto& c : {triangle, star}) {
    print(c);
    std::cout << "  ->";
    print(line_graph_of(c));
    std::cout << '\n';
  }

  const std::vector<std::size_t> ns{3, 4, 5};
  for (std::size_t n : ns) {
    const auto census = oracle_census(n);
    std::cout << "n=" << n << ": " << oracle_counts(census).u << " restricted covers, "
              << oracle_line_count(census) << " line graphs\n";
  }
}
