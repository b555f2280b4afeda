#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpi/montecarlo/renorm_runs.hpp"

using namespace cpi;

namespace {

BlockRunConfig small_blocks() {
  BlockRunConfig c;
  c.kernel.lambda = 8.0;
  c.shape = {2, 3, 0.5};
  c.m_max = 4;
  c.n_max = 2;
  c.fields = 24;
  c.verify_cells = 40;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("block runs verify cleanly and count every cell") {
  const auto c = small_blocks();
  const auto r = run_blocks(c);
  CHECK(r.verified == 40);
  CHECK(r.mismatches.empty());
  std::int64_t total = 0;
  for (const auto& row : r.phi_counts) total += row[0] + row[1] + row[2];
  CHECK(total == static_cast<std::int64_t>(r.fields.size()) * 14);
  CHECK(r.phi_counts[0][2] == 0);
  REQUIRE_FALSE(r.closure.empty());
  CHECK(r.closure.front().r == 1);
  const auto j = block_summary(c, r);
  CHECK(j["schema"] == "cpi-blocks v1");
}

TEST_CASE("block runs do not depend on the thread count") {
  auto c = small_blocks();
  c.threads = 1;
  const auto a = block_summary(c, run_blocks(c));
  c.threads = 3;
  auto b = block_summary(c, run_blocks(c));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("tiny guard contaminates every block field") {
  auto c = small_blocks();
  c.guard = 1;
  c.verify_cells = 0;
  CHECK_THROWS_AS(run_blocks(c), ContaminationError);
}

TEST_CASE("expanding samples carry clean barriers") {
  ExpandingRunConfig c;
  c.accept = 1;
  c.queries = 400;
  c.seed = 3;
  c.threads = 1;
  const auto r = run_expanding(c);
  REQUIRE(r.samples.size() == 1);
  CHECK_FALSE(r.exhausted);
  CHECK(r.draws == r.samples.back().draw + 1);
  CHECK(r.prefilter_pass >= r.local_pass);
  CHECK(r.local_pass >= 1);
  const auto& s = r.samples.front();
  CHECK(s.properties.clean());
  CHECK(s.properties.queries == 400);
  CHECK(s.barrier.beta_bar > 0.0);
  c.threads = 2;
  CHECK(run_expanding(c).samples.front().draw == s.draw);
}

TEST_CASE("expanding runs stop at the draw cap") {
  ExpandingRunConfig c;
  c.max_draws = 1000;
  const auto r = run_expanding(c);
  CHECK(r.exhausted);
  CHECK(r.samples.empty());
  CHECK(r.draws == 1000);
}

TEST_CASE("good scan counts points along the edge") {
  GoodScanConfig c;
  c.kernel.lambda = 8.0;
  c.lengths = {0.5, 1.0, 2.0};
  c.dt = 0.01;
  c.replicas = 3;
  const auto r = run_good_scan(c);
  REQUIRE(r.no_good.size() == 3);
  CHECK(r.used <= 3);
  for (std::size_t l = 1; l < 3; ++l) CHECK(r.no_good[l] <= r.no_good[l - 1]);
  std::int64_t pts = 0;
  for (const auto& o : r.replicas) pts += o.points;
  CHECK(pts > 0);
  CHECK(good_scan_summary(c, r)["no_good"].size() == 3);
}

TEST_CASE("escape frequencies") {
  EscapeConfig c;
  c.fields = 300;
  c.height = 12;
  c.levels = {1, 2, 4};
  c.p = 1.0;
  auto r = run_escapes(c);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(r.holds[l] == 300);
    CHECK(r.escapes[l] == 0);
  }
  CHECK(r.holds_height == 300);
  c.p = 0.9;
  r = run_escapes(c);
  for (std::size_t l = 0; l < 3; ++l) CHECK(r.escapes[l] <= r.holds[l]);
  CHECK(r.escapes[0] > 0);
  c.levels = {13};
  CHECK_THROWS_AS(run_escapes(c), InvalidArgument);
}
