#include <doctest.h>

#include <cmath>

#include "asp/selfcheck.hpp"

using namespace asp;

TEST_SUITE("selfcheck") {

TEST_CASE("engine matches the scalar reference for ten thousand steps") {
  ScalarRefParams p;
  const auto r = compare_engine_to_scalar_reference(p, 10000, 42);
  CHECK(r.post_spikes > 50);
  CHECK(r.max_dv <= 1e-9);
  CHECK(r.max_di <= 1e-9);
  CHECK(r.max_dtheta <= 1e-9);
  CHECK(r.max_dtrace <= 1e-9);
  CHECK(r.max_dw <= 1e-9);
  CHECK(r.seconds < 1.0);
}

TEST_CASE("scalar reference produces sensible dynamics on its own") {
  ScalarRefParams p;
  std::vector<std::uint8_t> pre(2000, 0);
  for (std::size_t k = 0; k < pre.size(); k += 3) pre[k] = 1;
  const auto steps = scalar_reference_run(p, pre);
  REQUIRE(steps.size() == pre.size());
  int spikes = 0;
  for (const auto& s : steps) {
    CHECK(s.w >= 0.0);
    CHECK(s.w <= p.w_max);
    CHECK(s.pre_rec <= 1.0 + 1e-12);
    spikes += s.spiked;
  }
  CHECK(spikes > 0);
  // theta ratchets up with spiking
  CHECK(steps.back().theta > 0.0);
}

TEST_CASE("all release-gate checks pass with defaults") {
  const auto checks = run_selfchecks();
  REQUIRE(!checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("a perturbed trace constant is caught and named") {
  PlasticityConfig cfg;
  cfg.tau_acc = 39.0;  // deliberately wrong
  const auto checks = run_selfchecks(cfg);
  bool closed_form_failed = false, ratios_failed = false;
  for (const auto& c : checks) {
    if (c.name == "trace-closed-form" && !c.pass) closed_form_failed = true;
    if (c.name == "trace-default-ratios" && !c.pass) ratios_failed = true;
  }
  CHECK(closed_form_failed);
  CHECK(ratios_failed);
}

}  // TEST_SUITE
