#include <gtest/gtest.h>

#include <sstream>

#include "ewls/errors.hpp"
#include "ewls/generators.hpp"
#include "ewls/io.hpp"

using namespace ewls;

TEST(Io, RationalRoundTrip) {
  for (const Rational& q : {Rational(3, 7), Rational(-5, 2), from_double(0.1), from_double(1e300)}) {
    EXPECT_EQ(rational_from_json(rational_to_json(q)), q);
  }
  EXPECT_TRUE(rational_to_json(from_double(1e300))[0].is_string());
  EXPECT_EQ(rational_from_json(Json(0.5)), Rational(1, 2));
  EXPECT_THROW(rational_from_json(Json::array({1, 0})), DomainError);
}

TEST(Io, InstanceRoundTrip) {
  const auto inst = generate_instance(Profile::uniform, 12, 5);
  const auto back = instance_from_json(Json::parse(instance_to_json(inst).dump()));
  ASSERT_EQ(back.size(), inst.size());
  EXPECT_EQ(back.capacity(), inst.capacity());
  for (const auto& c : inst.commodities()) {
    EXPECT_EQ(back.by_id(c.id).K, c.K);
    EXPECT_EQ(back.by_id(c.id).gamma, c.gamma);
  }
  EXPECT_THROW(instance_from_json(Json::parse(R"({"capacity": 1})")), DomainError);
}

TEST(Io, PolicyRoundTripReproducesCertificate) {
  const auto inst = generate_instance(Profile::uniform, 12, 6);
  const auto res = classical_two_approx(inst);
  const auto pol = sosi_to_cyclic(res.sosi);
  const auto j = policy_to_json(pol);
  EXPECT_TRUE(j["schedules"].contains("0"));
  EXPECT_EQ(j["schedules"]["0"]["orders"][0].size(), 4u);
  const auto back = policy_from_json(Json::parse(j.dump()));
  const auto a = evaluate_policy(inst, pol), b = evaluate_policy(inst, back);
  EXPECT_NEAR(b.total_cost, a.total_cost, 1e-12 * a.total_cost);
  EXPECT_EQ(a.peak_space_upper, b.peak_space_upper);
}

TEST(Io, PolicyRejectsMalformed) {
  EXPECT_THROW(policy_from_json(Json::parse(R"({"schedules": {"x": {}}})")), DomainError);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"schedules": {"0": {"cycle": [1,1], "i0": [0,1], "orders": [[0,1,1]]}}})")),
               DomainError);
}

TEST(Io, TraceCsv) {
  const Instance inst(10, {{0, 1, 1, 1}, {1, 1, 1, 2}});
  std::ostringstream out;
  write_trace_csv(out, inst, sosi_to_cyclic({{0, {1, 0}}, {1, {0.5, 0}}}), 1, 4);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,commodity_id,inventory,total_space");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,1,2");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Io, ReportContainsScenarioAndFlags) {
  const auto inst = generate_instance(Profile::two_scale, 10, 2);
  const auto j = report_to_json(run_sub2(inst, {}));
  EXPECT_TRUE(j.contains("scenario"));
  EXPECT_TRUE(j["guarantee_flags"].is_array());
  EXPECT_TRUE(j["cost"].contains("lower_bound"));
  EXPECT_TRUE(j["scaling"].contains("analytic_factor"));
}
