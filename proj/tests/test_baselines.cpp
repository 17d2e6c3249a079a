#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "isl/baselines.hpp"
#include "isl/rng.hpp"

namespace {

isl::RunConfig direct_config(std::uint64_t max_step, std::uint64_t seed = 0) {
  isl::RunConfig cfg;
  cfg.max_step = max_step;
  cfg.seed = seed;
  return cfg;
}

} // namespace

TEST_CASE("GA configuration validation") {
  isl::GaConfig ga;
  CHECK(ga.elite_frac == 0.2);
  CHECK(ga.tournament == 3);
  CHECK_NOTHROW(ga.validate());

  isl::GaConfig bad = ga;
  bad.elite_frac = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.elite_frac = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ga;
  bad.tournament = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ga;
  bad.mutation_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ga;
  bad.mutation_scale = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.mutation_scale = 0.0;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("GA runs are deterministic and worker-invariant") {
  const auto problem = isl::make_problem("sphere", {.direct_dim = 5});
  const isl::GaConfig ga;
  const auto a = isl::ga_run(direct_config(200, 4), ga, problem);
  const auto b = isl::ga_run(direct_config(200, 4), ga, problem);
  CHECK(isl::reports_equal_ignoring_time(a, b));

  auto threaded = direct_config(200, 4);
  threaded.workers = 3;
  const auto c = isl::ga_run(threaded, ga, problem);
  CHECK(isl::reports_equal_ignoring_time(a, c));

  const auto d = isl::ga_run(direct_config(200, 5), ga, problem);
  CHECK(!isl::reports_equal_ignoring_time(a, d));
}

TEST_CASE("GA without mutation can never beat its founding generation") {
  // Children are verbatim copies of tournament winners, and the elite
  // keeps the founder best alive, so the best test fitness stays flat.
  const auto problem = isl::make_problem("sphere", {.direct_dim = 6});
  isl::GaConfig ga;
  ga.mutation_scale = 0.0;
  const auto report = isl::ga_run(direct_config(300, 9), ga, problem);
  REQUIRE(report.archive.size() > 1);
  for (const auto& entry : report.archive)
    CHECK(entry.test_fitness == report.archive[0].test_fitness);
}

TEST_CASE("GA improves the sphere objective with mutation enabled") {
  const auto problem = isl::make_problem("sphere", {.direct_dim = 10});
  const isl::GaConfig ga;
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto report = isl::ga_run(direct_config(20000, seed), ga, problem);
    if (report.best.test_fitness >
        report.records.front().test_fitness_mean)
      ++improved;
  }
  CHECK(improved >= 4);
}

TEST_CASE("GA reports use the shared budget accounting and no style letters") {
  const auto problem = isl::make_problem("sphere", {.direct_dim = 3});
  const auto report = isl::ga_run(direct_config(95, 2), isl::GaConfig{}, problem);
  CHECK(report.total_steps == 100); // ten agents per generation
  CHECK(report.records.size() == 10);
  for (const auto& rec : report.records) CHECK(rec.best_style == '-');
}

TEST_CASE("random search is deterministic and keeps the best seen") {
  const auto problem = isl::make_problem("sphere", {.direct_dim = 5});
  const auto a = isl::random_search_run(direct_config(200, 6), problem);
  const auto b = isl::random_search_run(direct_config(200, 6), problem);
  CHECK(isl::reports_equal_ignoring_time(a, b));

  REQUIRE(a.records.size() == 20);
  double best_seen = a.archive[0].test_fitness;
  for (std::size_t i = 0; i < a.archive.size(); ++i) {
    best_seen = std::max(best_seen, a.archive[i].test_fitness);
    std::vector<isl::ArchiveEntry> prefix(
        a.archive.begin(),
        a.archive.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    CHECK(isl::archive_best(prefix).test_fitness == best_seen);
  }
  CHECK(a.best.test_fitness == best_seen);
  for (const auto& rec : a.records) CHECK(rec.best_style == '-');
}

TEST_CASE("random search generations are independent draws") {
  // Fresh batches come from per-generation init streams, so a longer run
  // replays a shorter one's generations verbatim.
  const auto problem = isl::make_problem("sphere", {.direct_dim = 4});
  const auto short_run = isl::random_search_run(direct_config(50, 12), problem);
  const auto long_run = isl::random_search_run(direct_config(150, 12), problem);
  REQUIRE(short_run.records.size() == 5);
  REQUIRE(long_run.records.size() == 15);
  for (std::size_t g = 0; g < 5; ++g) {
    CHECK(short_run.records[g].best_fitness ==
          long_run.records[g].best_fitness);
    CHECK(short_run.records[g].test_fitness_mean ==
          long_run.records[g].test_fitness_mean);
  }
}

TEST_CASE("the sampling phase is shared between optimizers") {
  // The first generations of the main optimizer draw from the same init
  // streams as random search, so their records agree there.
  const auto problem = isl::make_problem("sphere", {.direct_dim = 4});
  const auto isl_report = isl::run(direct_config(100, 13), problem);
  const auto rs_report = isl::random_search_run(direct_config(100, 13), problem);
  for (std::size_t g = 0; g < 3; ++g) {
    CHECK(isl_report.records[g].best_fitness ==
          rs_report.records[g].best_fitness);
    CHECK(isl_report.records[g].test_fitness_mean ==
          rs_report.records[g].test_fitness_mean);
  }
}
