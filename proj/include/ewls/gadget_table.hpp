#pragma once

#include <array>
#include <cstdint>

namespace ewls::gadget_table {

struct Frac {
  std::int64_t num;
  std::int64_t den;
};

constexpr std::int64_t gcd(std::int64_t a, std::int64_t b) { return b == 0 ? (a < 0 ? -a : a) : gcd(b, a % b); }
constexpr Frac norm(Frac f) {
  const std::int64_t g = gcd(f.num, f.den);
  return {f.num / g, f.den / g};
}
constexpr Frac add(Frac a, Frac b) { return norm({a.num * b.den + b.num * a.den, a.den * b.den}); }
constexpr Frac mul(Frac a, Frac b) { return norm({a.num * b.num, a.den * b.den}); }
constexpr bool eq(Frac a, Frac b) { return a.num * b.den == b.num * a.den; }
constexpr bool lt(Frac a, Frac b) { return a.num * b.den < b.num * a.den; }

// A run of consecutive B orders. Lengths are multiples of T_B. When per_tb is set the count is
// count * (T_A / T_B), i.e. it scales with the number of B cycles inside one A cycle.
struct Run {
  Frac count;
  Frac length;
  bool per_tb;
};

struct Case {
  int id;
  int k;           // T_B = 2^-k T_A; -1 marks the parametric case (k >= 5)
  Frac a_cycle;    // joint cycle in units of T_A; A places one order of this size at 0
  Frac b_offset;   // epoch of the first B order
  std::array<Run, 8> runs;
  int run_count;
  Frac peak_ratio;       // peak / (gamma_A Ibar_A + gamma_B Ibar_B) with gamma_A T_A = gamma_B T_B
  Frac cost_blowup;      // exact (cases 1, 2, 6) or upper bound (cases 3-5)
  Frac order_rate_blowup;
  bool blowup_is_bound;
};

inline constexpr std::array<Case, 6> cases{{
    {1, 0, {1, 1}, {1, 2}, {{{{1, 1}, {1, 1}, false}}}, 1, {3, 2}, {1, 1}, {1, 1}, false},
    {2, 1, {1, 1}, {1, 3}, {{{{2, 1}, {1, 1}, false}}}, 1, {5, 3}, {1, 1}, {1, 1}, false},
    {3, 2, {31, 32}, {5, 32}, {{{{1, 1}, {7, 8}, false}, {{3, 1}, {1, 1}, false}}}, 2, {27, 16}, {32, 31}, {32, 31}, true},
    {4, 3, {31, 32}, {3, 32},
     {{{{1, 1}, {27, 32}, false},
       {{1, 1}, {19, 20}, false},
       {{4, 1}, {1, 1}, false},
       {{1, 1}, {153, 160}, false},
       {{1, 1}, {1, 1}, false}}},
     5, {2201, 1280}, {32, 31}, {32, 31}, true},
    {5, 4, {31, 32}, {0, 1},
     {{{{6, 1}, {3, 4}, false}, {{7, 1}, {1, 1}, false}, {{3, 1}, {4, 3}, false}}}, 3, {7, 4}, {32, 31}, {32, 31}, true},
    {6, -1, {1, 1}, {0, 1},
     {{{{1, 2}, {3, 4}, true}, {{1, 4}, {1, 1}, true}, {{9, 32}, {4, 3}, true}}}, 3, {7, 4}, {33, 32}, {33, 32}, false},
}};

// B's orders must exactly cover one joint cycle.
constexpr bool covers_cycle(const Case& c) {
  Frac total{0, 1};
  for (int r = 0; r < c.run_count; ++r) {
    Frac amount = mul(c.runs[r].count, c.runs[r].length);
    if (!c.runs[r].per_tb) amount = mul(amount, {1, std::int64_t{1} << c.k});
    total = add(total, amount);
  }
  return eq(total, c.a_cycle);
}

constexpr bool well_formed(const Case& c) {
  return covers_cycle(c) && !lt(c.b_offset, {0, 1}) && lt(c.b_offset, c.a_cycle) && (c.k >= 0) != c.runs[0].per_tb;
}

static_assert(well_formed(cases[0]) && well_formed(cases[1]) && well_formed(cases[2]));
static_assert(well_formed(cases[3]) && well_formed(cases[4]) && well_formed(cases[5]));
// Case 4's peak epoch: offset plus the first B order.
static_assert(eq(add(cases[3].b_offset, mul(cases[3].runs[0].length, {1, 8})), {51, 256}));

}  // namespace ewls::gadget_table
