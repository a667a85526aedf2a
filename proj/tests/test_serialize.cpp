#include <gtest/gtest.h>

#include <cmath>

#include "weakmorrey/serialize.hpp"

using namespace weakmorrey;

namespace {

// Through text, so number formatting is part of the round trip.
template <class T>
T round_trip(const T& v) {
  return json::parse(json(v).dump()).get<T>();
}

SearchConfig fast() {
  SearchConfig c;
  c.radius_grid = 48;
  c.center_grid = 6;
  c.polish_evaluations = 60;
  return c;
}

}  // namespace

TEST(Serialize, NonFiniteReals) {
  EXPECT_EQ(real(kInf), "inf");
  EXPECT_EQ(real(-kInf), "-inf");
  EXPECT_EQ(real(std::nan("")), "nan");
  EXPECT_EQ(get_real(json("inf")), kInf);
  EXPECT_TRUE(std::isnan(get_real(json("nan"))));
  EXPECT_THROW(get_real(json("infinity")), input_error);
  EXPECT_THROW(get_real(json(true)), input_error);
}

TEST(Serialize, Ball) {
  const Ball b({0.1, -2.0 / 3}, 1e-7);
  EXPECT_EQ(ball_from_json(json::parse(json(b).dump())), b);
  EXPECT_THROW(ball_from_json(json{{"center", {0.0}}}), input_error);
  EXPECT_THROW(ball_from_json(json{{"center", {0.0}}, {"radius", -1}}), input_error);
}

TEST(Serialize, System) {
  const ExponentSystem sys({{3, 6}, {1.5, 3}}, {1, 2});
  std::size_t n = 0;
  const auto back = system_from_json(json::parse(system_to_json(sys, 4).dump()), &n);
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(back.p_list(), sys.p_list());
  EXPECT_EQ(back.target().q, 2.0);
  EXPECT_THROW(system_from_json(json::parse(R"({"pairs": [[2, 2], [2, 2]], "target": [1, 2]})")), invalid_system);
  EXPECT_THROW(system_from_json(json::parse(R"({"pairs": [[2, 2]]})")), input_error);
}

TEST(Serialize, SearchConfigKeepsDefaults) {
  SearchConfig c = json::parse(R"({"radius_grid": 64, "seed": 9})").get<SearchConfig>();
  EXPECT_EQ(c.radius_grid, 64u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.center_grid, SearchConfig{}.center_grid);
  EXPECT_EQ(round_trip(c), c);
  EXPECT_THROW(json::parse(R"({"radius_min": 2, "radius_max": 1})").get<SearchConfig>(), input_error);
  EXPECT_THROW(json::parse(R"({"mc_samples": 10})").get<SearchConfig>(), input_error);
}

TEST(Serialize, Reports) {
  const auto f = product({power(1.3, 0.5, {0.0}), step({0.0}, {1, 2}, {2, 1})});
  const auto q = weak_morrey_norm(f, 1, 2, fast());
  EXPECT_EQ(round_trip(q), q);

  QuasinormReport unbounded;
  unbounded.value = kInf;
  unbounded.unbounded = true;
  unbounded.diagnostics = "grows without bound";
  EXPECT_EQ(round_trip(unbounded), unbounded);

  const auto inc = check_inclusion(f, 1, 1.5, 2, fast());
  EXPECT_EQ(round_trip(inc), inc);

  const auto bc = bound_comparison(std::vector<double>{3, 1.5});
  EXPECT_EQ(round_trip(bc), bc);

  const auto split = optimal_split({1, 4}, {3, 1.5}, 0.7);
  EXPECT_EQ(round_trip(split), split);

  const auto g = power(1, 0.5, {0.0});
  const auto ub = union_bound_check({g, g}, Ball({0.0}, 1), 4, {0.5, 0.5});
  EXPECT_EQ(round_trip(ub), ub);

  const auto h = check_holder({g, g}, ExponentSystem({{2, 2}, {2, 2}}, {1, 1}), fast());
  EXPECT_EQ(round_trip(h), h);
}

TEST(Serialize, Sharpness) {
  FamilyConfig fam;
  fam.kind = FamilyKind::two_level_steps;
  fam.n = 2;
  fam.log_width = {-1, 0.5};
  fam.evals_per_restart = 15;
  EXPECT_EQ(round_trip(fam), fam);

  const auto res = search_extremal(ExponentSystem({{2, 2}, {2, 2}}, {1, 1}), fam, 30, 4);
  EXPECT_EQ(round_trip(res), res);

  SharpnessTrial nan_trial{3, 1, {0.5}, std::nan("")};
  EXPECT_EQ(round_trip(nan_trial), nan_trial);

  EXPECT_THROW(json::parse(R"({"kind": "wavelets"})").get<FamilyConfig>(), input_error);
  EXPECT_THROW(json::parse(R"({"kind": "truncated_powers", "log_radius": [1]})").get<FamilyConfig>(), input_error);
}
