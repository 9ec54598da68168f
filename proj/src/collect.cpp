#include "ringtoss/collect.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace ringtoss {

StageStats& StageStats::operator+=(const StageStats& o) {
  targets += o.targets;
  draws += o.draws;
  ik_fail += o.ik_fail;
  singular += o.singular;
  velocity_limit += o.velocity_limit;
  collision += o.collision;
  planner_reject += o.planner_reject;
  plan_budget += o.plan_budget;
  stability_reject += o.stability_reject;
  invalid += o.invalid;
  fit_fail += o.fit_fail;
  accepted += o.accepted;
  return *this;
}

nn::Json StageStats::to_json() const {
  auto rate = [&](long v) { return draws > 0 ? static_cast<double>(v) / static_cast<double>(draws) : 0.0; };
  nn::Json counts{{"targets", targets},
                  {"draws", draws},
                  {"ik_fail", ik_fail},
                  {"singular", singular},
                  {"velocity_limit", velocity_limit},
                  {"collision", collision},
                  {"planner_reject", planner_reject},
                  {"quick_reject", quick_reject()},
                  {"plan_budget", plan_budget},
                  {"stability_reject", stability_reject},
                  {"invalid", invalid},
                  {"fit_fail", fit_fail},
                  {"accepted", accepted}};
  nn::Json rates;
  for (const auto& [k, v] : counts.items()) {
    if (k != "targets" && k != "draws") rates[k] = rate(v.get<long>());
  }
  return {{"counts", counts}, {"rates", rates}, {"acceptance_rate", acceptance_rate()}};
}

Outcome<PlannedThrow, NoThrowFound> plan_throw(const World& w, const Target& target, Rng& rng, StageStats& stats,
                                               int max_draws) {
  ++stats.targets;
  for (int draw = 0; draw < max_draws; ++draw) {
    ++stats.draws;
    const ThrowState ts = sample_throw_state(target, w.geometry, w.sampling, rng);
    const auto goal = feasible_goal(w.arm, w.env, ts, w.geometry, rng);
    if (!goal) {
      switch (goal.error().stage) {
        case InfeasibleStage::Ik: ++stats.ik_fail; break;
        case InfeasibleStage::Singular: ++stats.singular; break;
        case InfeasibleStage::VelocityLimit: ++stats.velocity_limit; break;
        case InfeasibleStage::Collision: ++stats.collision; break;
      }
      continue;
    }
    const JointState start{goal->q, Vec6::Zero()};
    const auto path = plan(w.arm, start, *goal, w.env, rng, w.planner);
    if (!path) {
      if (path.error().kind == PlanFail::Kind::QuickReject) ++stats.planner_reject; else ++stats.plan_budget;
      continue;
    }
    const Path smooth = shortcut_smooth(*path, w.arm, w.env, w.planner.n_smoothing, rng, w.planner);
    Trajectory traj = discretize(smooth, w.planner.f_ctrl);
    const double sensitivity = release_sensitivity(traj, w.arm, w.geometry);
    if (!(sensitivity <= w.stability_threshold)) {
      ++stats.stability_reject;
      continue;
    }
    if (!validate_trajectory(traj, w.arm, w.env, *goal).ok()) {
      ++stats.invalid;
      continue;
    }
    if (static_cast<long>(traj.steps()) < 2L * w.basis.size()) {
      ++stats.fit_fail;
      continue;
    }
    return PlannedThrow{target, ts, *goal, std::move(traj), sensitivity};
  }
  return NoThrowFound{max_draws};
}

CollectResult collect(const World& world, const CollectOptions& opts) {
  if (opts.n < 0) throw DomainError("collect: negative item count");
  CollectResult result;
  result.items.resize(static_cast<std::size_t>(opts.n));
  std::atomic<long> next{0}, done{0}, draws{0}, accepted{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::string abort_reason;

  auto fail = [&](const std::string& why) {
    std::lock_guard<std::mutex> lock(mu);
    if (!abort.exchange(true)) abort_reason = why;
  };

  auto worker = [&] {
    StageStats local;
    try {
      for (long i = next++; i < opts.n && !abort; i = next++) {
        Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(i));
        CollectedItem& item = result.items[static_cast<std::size_t>(i)];
        long used = 0;
        bool found = false;
        while (!found && used < world.max_draws_per_item && !abort) {
          const Target target{uniform(rng, opts.r.min, opts.r.max), 0.0};
          StageStats s;
          const int budget = static_cast<int>(std::min<long>(world.draws_per_target, world.max_draws_per_item - used));
          auto planned = plan_throw(world, target, rng, s, budget);
          used += s.draws;
          if (planned) {
            auto fitted = fit(planned->trajectory, world.basis);
            if (fitted) {
              ++s.accepted;
              item.record.params = std::move(fitted)->params;
              item.record.target = target;
              item.record.seed = mix_seed(opts.seed, static_cast<std::uint64_t>(i));
              item.goal = planned->goal;
              if (opts.keep_trajectories) item.trajectory = std::move(planned).value().trajectory;
              found = true;
            } else {
              ++s.fit_fail;
            }
          }
          local += s;
          const long d = draws += s.draws;
          const long a = accepted += s.accepted;
          if (d >= kGuardWindow && static_cast<double>(a) < kGuardRate * static_cast<double>(d)) {
            fail("acceptance rate " + std::to_string(static_cast<double>(a) / static_cast<double>(d)) + " after " +
                 std::to_string(d) + " draws is below 1%; check the ranges and the arm description");
          }
        }
        if (!found && !abort) fail("item " + std::to_string(i) + " found no feasible throw within its draw budget");
        const long finished = ++done;
        if (opts.progress && found) {
          std::lock_guard<std::mutex> lock(mu);
          opts.progress(finished);
        }
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
    std::lock_guard<std::mutex> lock(mu);
    result.stats += local;
  };

  const int n_workers = std::max(1, opts.workers);
  std::vector<std::thread> threads;
  for (int t = 1; t < n_workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (abort) throw CollectionAborted(abort_reason);
  return result;
}

}  // namespace ringtoss
