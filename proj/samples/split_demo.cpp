// Prints the optimal threshold split next to the equal-share choice for a
// few exponent lists, and the Hölder constants for each.

#include <cstdio>
#include <vector>

#include "weakmorrey.hpp"

int main() {
  using namespace weakmorrey;
  const std::vector<std::vector<double>> cases{{2, 2}, {3, 1.5}, {2, 3, 6}, {1.01, 20}};
  for (const auto& p : cases) {
    const std::vector<double> a(p.size(), 1.0);
    const auto s = optimal_split(a, p, 1.0);
    const auto c = bound_comparison(p);
    std::printf("p =");
    for (double x : p) std::printf(" %g", x);
    std::printf("\n  c_new %.9g  c_mid %.9g  c_old %.9g\n", c.c_new, c.c_mid, c.c_old);
    std::printf("  optimal:     objective %.9g  theta*prod y %.9g\n", s.objective, s.constraint_product);
    std::printf("  equal share: objective %.9g  theta*prod y %.9g%s\n", s.equal_share_objective,
                s.equal_share_constraint_product, s.equal_share_feasible ? "" : "  (infeasible)");
  }
}
