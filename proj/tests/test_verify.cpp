#include <catch2/catch_amalgamated.hpp>

#include "wchaos/verify.hpp"

using namespace wchaos;

TEST_CASE("verify battery passes on a small run") {
  VerifyConfig cfg;
  cfg.instances = 20;
  cfg.seed = 42;
  const auto rep = run_verify(cfg);
  CHECK(rep.all_pass());
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.failures == 0);
    CHECK(c.instances > 0);
  }
}

TEST_CASE("verify battery is deterministic in its configuration") {
  VerifyConfig cfg;
  cfg.instances = 10;
  cfg.seed = 7;
  const auto a = run_verify(cfg);
  const auto b = run_verify(cfg);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].failures == b.checks[i].failures);
    CHECK(a.checks[i].max_rel_dev == b.checks[i].max_rel_dev);
  }
}

TEST_CASE("negative control: a corrupted constant must be caught") {
  VerifyConfig cfg;
  cfg.instances = 20;
  cfg.seed = 42;
  cfg.corrupt_constant = true;
  const auto rep = run_verify(cfg);
  CHECK(!rep.all_pass());
  bool found = false;
  for (const auto& c : rep.checks)
    if (c.name == "cumulant.closed_vs_oracle") {
      found = true;
      CHECK(c.failures > 0);
    }
  CHECK(found);
}
