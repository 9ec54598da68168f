// End-to-end acceptance run. Prints one line per criterion:
//   criterion N: PASS|FAIL <measurements>
// Expensive artifacts (datasets, trained models) are cached under
// --cache/<config hash>/ and reused when present.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ringtoss/collect.hpp"
#include "ringtoss/dataset_io.hpp"
#include "ringtoss/dimt.hpp"
#include "ringtoss/experiments.hpp"
#include "support/dimt_oracle.hpp"
#include "support/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace ringtoss;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void note(const std::string& msg) { std::cerr << "[acceptance] " << msg << std::endl; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Cache {
 public:
  Cache(const std::string& root, const std::string& key) : dir_(fs::path(root) / key) {
    if (!root.empty()) fs::create_directories(dir_);
    enabled_ = !root.empty();
  }
  bool enabled() const { return enabled_; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  bool has(const std::string& name) const { return enabled_ && fs::exists(dir_ / name); }

 private:
  fs::path dir_;
  bool enabled_ = false;
};

struct Context {
  ExperimentConfig cfg;
  Cache cache;
  std::optional<CollectResult> planned;  // criterion 1 collection, trajectories kept
  std::optional<Autoencoder> ae;         // 9k model from criterion 6

  const CollectResult& planned_throws() {
    if (!planned) {
      CollectOptions o;
      o.n = 1000;
      o.r = cfg.r_plan;
      o.seed = cfg.seed;
      o.workers = cfg.workers;
      o.keep_trajectories = true;
      const auto t0 = Clock::now();
      planned = collect(cfg.world, o);
      note("collected 1000 planned throws in " + fmt("%.1f", seconds_since(t0)) + " s");
    }
    return *planned;
  }
};

// ------------------------------------------------------------------ 1

Verdict planner_validity(Context& ctx) {
  const auto& w = ctx.cfg.world;
  const auto& items = ctx.planned_throws().items;
  int ok = 0;
  std::string first_failure;
  for (const auto& it : items) {
    const auto rep = validate_trajectory(it.trajectory, w.arm, w.env, it.goal, 1e-6);
    if (rep.ok()) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = " first failure: " + rep.summary();
    }
  }
  return {ok == static_cast<int>(items.size()) && items.size() == 1000u,
          std::to_string(ok) + "/" + std::to_string(items.size()) + " trajectories pass the validity suite" +
              first_failure};
}

// ------------------------------------------------------------------ 2

Verdict ballistic_consistency(Context& ctx) {
  const auto& w = ctx.cfg.world;
  const auto& items = ctx.planned_throws().items;
  int hits = 0;
  double worst_closed_form = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& it = items[i];
    Rng rng = make_rng(ctx.cfg.seed, i);
    const auto out = execute(it.trajectory, it.record.target, w.arm, w.geometry, GapModel::none(), rng);
    if (out && out->success) ++hits;
    const ThrowState s = release_state(it.trajectory, w.arm, w.geometry, GapModel::none(), rng);
    const Vec3 land = ballistic_landing(s, w.geometry);
    worst_closed_form = std::max(worst_closed_form, std::hypot(land.x() - it.record.target.x, land.y() - it.record.target.y));
  }
  const double rate = hits / 100.0;
  return {rate >= 0.9 && worst_closed_form <= 1e-6,
          "zero-gap hit rate " + fmt("%.2f", rate) + " (>= 0.90), closed-form landing error max " +
              fmt("%.2e", worst_closed_form) + " m (<= 1e-6)"};
}

// ------------------------------------------------------------------ 3

Verdict dimt_oracle(Context&) {
  Rng rng(0xD1A7);
  double worst = 0.0;
  int below_feasible = 0;
  for (int i = 0; i < 1000; ++i) {
    const double V = uniform(rng, 0.5, 10.0), A = uniform(rng, 0.5, 15.0);
    const double x0 = uniform(rng, -3.0, 3.0), x1 = uniform(rng, -3.0, 3.0);
    const double v0 = uniform(rng, -V, V), v1 = uniform(rng, -V, V);
    const double t = dimt_min_time(x0, v0, x1, v1, V, A);
    worst = std::max(worst, std::abs(t - ringtoss::testing::oracle_min_time(x0, v0, x1, v1, V, A)));
    if (t - 1e-4 >= 0.0 && ringtoss::testing::oracle_feasible(x0, v0, x1, v1, V, A, t - 1e-4)) ++below_feasible;
  }
  return {worst <= 1e-4 && below_feasible == 0, "max |T_min - T_oracle| " + fmt("%.2e", worst) +
                                                    " s (<= 1e-4) over 1000 instances, " +
                                                    std::to_string(below_feasible) + " feasible at T_min - 1e-4"};
}

// ------------------------------------------------------------------ 4

Verdict vmp_round_trip(Context& ctx) {
  const auto& w = ctx.cfg.world;
  const auto& items = ctx.planned_throws().items;
  double worst_rmse = 0.0, worst_boundary = 0.0;
  int failures = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    const Trajectory& traj = items[i].trajectory;
    const auto fitted = fit(traj, w.basis);
    if (!fitted) {
      ++failures;
      continue;
    }
    const auto rec = reconstruct(fitted->params, w.basis, w.planner.f_ctrl);
    if (!rec || rec->samples.size() != traj.samples.size()) {
      ++failures;
      continue;
    }
    double se = 0.0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) se += (rec->samples[k].q - traj.samples[k].q).squaredNorm();
    worst_rmse = std::max(worst_rmse, std::sqrt(se / static_cast<double>(traj.samples.size() * kNumJoints)));
    const double b = std::max({(rec->front().q - traj.front().q).cwiseAbs().maxCoeff(),
                               rec->front().qdot.cwiseAbs().maxCoeff(),
                               (rec->back().q - traj.back().q).cwiseAbs().maxCoeff(),
                               (rec->back().qdot - traj.back().qdot).cwiseAbs().maxCoeff()});
    worst_boundary = std::max(worst_boundary, b);
  }
  return {failures == 0 && worst_rmse <= 0.01 && worst_boundary <= 1e-9,
          "max position RMSE " + fmt("%.2e", worst_rmse) + " rad (<= 0.01) over 500 trajectories, boundary error " +
              fmt("%.1e", worst_boundary) + " (<= 1e-9), " + std::to_string(failures) + " fit failures"};
}

// ------------------------------------------------------------------ 5

// Smallest |pre-activation| over the hidden layers.
double kink_margin(const nn::DenseNet& net, const nn::Matrix& x) {
  nn::DenseNet::Cache cache;
  net.forward(x, cache);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < cache.pre.size(); ++l) m = std::min(m, cache.pre[l].cwiseAbs().minCoeff());
  return m;
}

Verdict gradient_check(Context&) {
  Rng rng(0x6AD);
  double worst = 0.0, worst_input = 0.0;
  const int nets = 100;
  int redraws = 0;
  for (int n = 0; n < nets; ++n) {
    const int depth = 1 + static_cast<int>(uniform(rng, 0.0, 4.0));
    std::vector<int> widths{1 + static_cast<int>(uniform(rng, 0.0, 8.0))};
    for (int l = 0; l < depth; ++l) widths.push_back(1 + static_cast<int>(uniform(rng, 0.0, 12.0)));
    const auto act = n % 2 == 0 ? nn::Activation::Swish : nn::Activation::LeakyRelu;
    nn::DenseNet net(widths, act);
    net.init(rng);
    const int batch = 1 + static_cast<int>(uniform(rng, 0.0, 5.0));
    nn::Matrix x = ringtoss::testing::random_matrix(batch, widths.front(), rng);
    // Central differences are meaningless across a leaky-ReLU kink; redraw inputs near one.
    while (act == nn::Activation::LeakyRelu && kink_margin(net, x) < 1e-3) {
      x = ringtoss::testing::random_matrix(batch, widths.front(), rng);
      ++redraws;
    }
    const nn::Matrix up = ringtoss::testing::random_matrix(batch, widths.back(), rng);
    const auto r = ringtoss::testing::check_gradients(net, x, up);
    worst = std::max(worst, r.max_rel_error);
    worst_input = std::max(worst_input, r.max_input_rel_error);
  }
  const double overall = std::max(worst, worst_input);
  return {overall <= 1e-5, "max relative error " + fmt("%.2e", overall) + " (<= 1e-5) over " + std::to_string(nets) +
                               " random networks, " + std::to_string(redraws) + " inputs redrawn near a kink"};
}

// ------------------------------------------------------------------ 6

std::vector<ParamRecord> cached_collection(Context& ctx, const std::string& name, int n, std::uint64_t seed,
                                           double* seconds) {
  if (ctx.cache.has(name)) {
    if (ctx.cache.has(name + ".seconds")) *seconds = nn::read_json_file(ctx.cache.path(name + ".seconds")).get<double>();
    return read_params_jsonl(ctx.cache.path(name));
  }
  CollectOptions o;
  o.n = n;
  o.r = ctx.cfg.r_plan;
  o.seed = seed;
  o.workers = ctx.cfg.workers;
  const long step = std::max(1, n / 10);
  o.progress = [&](long done) {
    if (done % step == 0) note("collect " + name + ": " + std::to_string(done) + "/" + std::to_string(n));
  };
  const auto t0 = Clock::now();
  std::vector<ParamRecord> out;
  for (auto& it : collect(ctx.cfg.world, o).items) out.push_back(it.record);
  *seconds = seconds_since(t0);
  if (ctx.cache.enabled()) {
    write_params_jsonl(ctx.cache.path(name), out);
    nn::write_json_file(ctx.cache.path(name + ".seconds"), *seconds);
  }
  return out;
}

struct TrainedAe {
  Autoencoder model;
  double seconds = 0.0;
  int epochs = 0;
};

TrainedAe cached_autoencoder(Context& ctx, const std::string& name, const nn::Matrix& data, double budget) {
  if (ctx.cache.has(name)) {
    const nn::Json j = nn::read_json_file(ctx.cache.path(name));
    return {autoencoder_from_json(j), j.at("training").at("seconds").get<double>(),
            j.at("training").at("epochs").get<int>()};
  }
  AeConfig cfg = ctx.cfg.ae;
  cfg.time_budget = std::max(1.0, budget);
  const auto t0 = Clock::now();
  const auto trained = train_autoencoder(data, cfg, ctx.cfg.seed, [&](int epoch, double tr, double va) {
    if (epoch % 100 == 0) note(name + " epoch " + std::to_string(epoch) + " train " + fmt("%.3g", tr) + " val " + fmt("%.3g", va));
  });
  if (!trained) throw DomainError("autoencoder dataset too small");
  TrainedAe out{trained->model, seconds_since(t0), trained->curve.epochs_run};
  if (ctx.cache.enabled()) {
    nn::Json j = to_json(out.model);
    j["training"] = {{"seconds", out.seconds}, {"epochs", out.epochs}, {"best_epoch", trained->curve.best_epoch}};
    nn::write_json_file(ctx.cache.path(name), j);
  }
  return out;
}

// Fraction of random held-out pairs whose midpoint latent decodes to a trajectory within joint limits.
double midpoint_probe(const ExperimentConfig& cfg, const Autoencoder& ae, const nn::Matrix& holdout, int pairs) {
  Rng rng(0x3D);
  const nn::Matrix z = ae.encode(holdout);
  int ok = 0;
  for (int p = 0; p < pairs; ++p) {
    const auto a = static_cast<Eigen::Index>(uniform(rng, 0.0, static_cast<double>(z.rows())));
    const auto b = static_cast<Eigen::Index>(uniform(rng, 0.0, static_cast<double>(z.rows())));
    const nn::Vector mid = 0.5 * (z.row(a) + z.row(b)).transpose();
    const auto g = decode_throw(mid, &ae, cfg.world.basis, cfg.world.planner.f_ctrl);
    ok += g && within_joint_limits(g->trajectory, cfg.world.arm) ? 1 : 0;
  }
  return static_cast<double>(ok) / pairs;
}

// Median over held-out rows of the per-row normalised RMSE.
double median_row_rmse(const Autoencoder& ae, const nn::Matrix& holdout) {
  const nn::Matrix a = ae.normalizer.apply(holdout);
  const nn::Matrix b = ae.normalizer.apply(ae.decode(ae.encode(holdout)));
  std::vector<double> r;
  for (Eigen::Index i = 0; i < a.rows(); ++i) r.push_back(std::sqrt((a.row(i) - b.row(i)).squaredNorm() / a.cols()));
  std::nth_element(r.begin(), r.begin() + static_cast<long>(r.size() / 2), r.end());
  return r[r.size() / 2];
}

Verdict table_iii_trend(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const double hour = 3600.0;
  double t_collect = 0.0, t_holdout = 0.0;
  const auto data = cached_collection(ctx, "dataset_9k.jsonl", cfg.n_collect, cfg.seed, &t_collect);
  const auto holdout = cached_collection(ctx, "holdout.jsonl", cfg.n_holdout, mix_seed(cfg.seed, 0x401D), &t_holdout);
  const nn::Matrix all = params_matrix(data), test = params_matrix(holdout);

  const TrainedAe small = cached_autoencoder(ctx, "ae_small.json", all.topRows(cfg.n_small), 600.0);
  const double spent = t_collect + t_holdout + small.seconds;
  const TrainedAe large = cached_autoencoder(ctx, "ae_9k.json", all, hour - spent - 30.0);
  ctx.ae = large.model;
  const double total = spent + large.seconds;

  const auto m_small = reconstruction_metrics(small.model, test);
  const auto m_large = reconstruction_metrics(large.model, test);
  const double ratio = m_small.rmse_normalized / m_large.rmse_normalized;
  const double length_ok = decoded_length_valid_fraction(large.model, test, cfg.world.basis.size());
  const double probe = midpoint_probe(cfg, large.model, test, 100);
  note("0.9k: rmse " + fmt("%.4f", m_small.rmse_normalized) + " lre " + fmt("%.2f", m_small.lre_percent) + "% epochs " +
       std::to_string(small.epochs) + "; 9k: epochs " + std::to_string(large.epochs));

  const bool pass = m_large.rmse_normalized <= 0.01 && m_large.lre_percent <= 2.6 && ratio >= 10.0 && total <= hour;
  return {pass, "9k rmse " + fmt("%.4f", m_large.rmse_normalized) + " (<= 0.01), 9k lre " +
                    fmt("%.2f", m_large.lre_percent) + "% (<= 2.6%), rmse(0.9k)/rmse(9k) " + fmt("%.1f", ratio) +
                    " (>= 10), collection+training " + fmt("%.0f", total) + " s (<= 3600); median row rmse " +
                    fmt("%.4f", median_row_rmse(large.model, test)) + ", decoded length >= 2K " +
                    fmt("%.2f", length_ok) + " (>= 0.99), midpoint probe " + fmt("%.2f", probe) + " (>= 0.80)"};
}

// ------------------------------------------------------------------ 7

Verdict table_i_drag_only(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const GapModel& gap = cfg.gap_drag_only;
  const auto plan1 = evaluate(cfg, Method::Plan1, gap, "drag_only", cfg.r_exec, cfg.eval_seeds, cfg.eval_targets);
  const auto residual = evaluate(cfg, Method::Residual, gap, "drag_only", cfg.r_exec, cfg.eval_seeds, cfg.eval_targets);
  double min_shortfall = std::numeric_limits<double>::infinity();
  for (const auto& s : plan1.seeds) {
    for (const auto& t : s.throws) {
      const auto& a = t.attempts.front();
      min_shortfall = std::min(min_shortfall, a.landed ? t.target.x - std::hypot(a.x_exe, a.y_exe)
                                                       : std::numeric_limits<double>::infinity());
    }
  }
  const double sr1 = plan1.mean_success_rate(), srr = residual.mean_success_rate();
  return {srr >= 0.9 && sr1 == 0.0 && min_shortfall > 0.07,
          "residual SR " + fmt("%.3f", srr) + " (>= 0.9), plan-1 SR " + fmt("%.3f", sr1) +
              " (= 0), min drag shortfall " + fmt("%.3f", min_shortfall) + " m (> 0.07), drag_coeff " +
              fmt("%.2f", gap.drag_coeff)};
}

// ------------------------------------------------------------------ 8, 9

struct Flows {
  FlowData data;
  FlowModel latent;
  FlowModel raw;
  double latent_seconds = 0.0;
  int latent_steps = 0;
  int raw_steps = 0;
};

FlowModel cached_flow(Context& ctx, const std::string& name, const nn::Matrix& x, const nn::Matrix& c,
                      const FlowConfig& fc, bool raw, double* seconds, int* steps) {
  if (ctx.cache.has(name)) {
    const nn::Json j = nn::read_json_file(ctx.cache.path(name));
    *seconds = j.at("training").at("seconds").get<double>();
    *steps = j.at("training").at("steps").get<int>();
    return flow_from_json(j);
  }
  const auto t0 = Clock::now();
  const auto trained = train_flow(x, c, fc, ctx.cfg.seed, raw, [&](int step, double loss) {
    if (step % 500 == 0) note(name + " step " + std::to_string(step) + " loss " + fmt("%.4g", loss));
  });
  *seconds = seconds_since(t0);
  *steps = trained.steps;
  if (ctx.cache.enabled()) {
    nn::Json j = to_json(trained.model);
    j["training"] = {{"seconds", *seconds}, {"steps", *steps}};
    nn::write_json_file(ctx.cache.path(name), j);
  }
  return trained.model;
}

Flows& flows(Context& ctx, double latent_budget) {
  static std::optional<Flows> f;
  if (f) return *f;
  if (!ctx.ae) throw DomainError("criteria 8 and 9 need the criterion 6 autoencoder");
  f.emplace();
  const ExperimentConfig& cfg = ctx.cfg;
  if (ctx.cache.has("flow_executions.jsonl")) {
    f->data = flow_data_from_log(read_execution_log(ctx.cache.path("flow_executions.jsonl")), *ctx.ae);
  } else {
    f->data = build_flow_data(cfg, *ctx.ae, cfg.gap, cfg.n_flow_data, mix_seed(cfg.seed, 0xF1));
    if (ctx.cache.enabled()) write_execution_log(ctx.cache.path("flow_executions.jsonl"), f->data.executions);
  }
  note("flow training set: " + std::to_string(f->data.latents.rows()) + " landed executions");
  FlowConfig fc = cfg.cfm;
  fc.time_budget = latent_budget;
  f->latent = cached_flow(ctx, "flow_latent.json", f->data.latents, f->data.conditions, fc, false, &f->latent_seconds,
                          &f->latent_steps);
  // The raw variant gets the same number of optimizer steps.
  fc.time_budget = 0.0;
  fc.epochs = f->latent_steps;
  double raw_seconds = 0.0;
  f->raw = cached_flow(ctx, "flow_raw.json", f->data.raw, f->data.conditions, fc, true, &raw_seconds, &f->raw_steps);
  return *f;
}

Verdict da_mmp(Context& ctx, double budget) {
  const ExperimentConfig& cfg = ctx.cfg;
  const auto t0 = Clock::now();
  Flows& f = flows(ctx, budget);
  const double train_seconds = f.latent_seconds;
  const GenerativeModels models{&*ctx.ae, &f.latent, f.latent.guidance, cfg.cfm.n_steps};
  const auto t_eval = Clock::now();
  const auto ours = evaluate(cfg, Method::DaMmp, cfg.gap, "default", cfg.r_exec, cfg.eval_seeds, cfg.eval_targets, models);
  const auto gen = evaluate_generalization(cfg, models, f.data.latents, cfg.generalize_r, cfg.eval_seeds, cfg.eval_targets);
  const double eval_seconds = seconds_since(t_eval);
  const auto plan1 = evaluate(cfg, Method::Plan1, cfg.gap, "default", cfg.r_exec, cfg.eval_seeds, cfg.eval_targets);
  const auto plan2 = evaluate(cfg, Method::Plan2, cfg.gap, "default", cfg.r_exec, cfg.eval_seeds, cfg.eval_targets);
  note("criterion 8 wall time " + fmt("%.0f", seconds_since(t0)) + " s");

  const double sr = ours.mean_success_rate();
  const int min_gen = *std::min_element(gen.successes_per_seed.begin(), gen.successes_per_seed.end());
  const bool bar = sr >= 0.5;
  const bool fallback = sr > plan1.mean_success_rate() && sr > plan2.mean_success_rate();
  const bool in_time = train_seconds + eval_seconds <= 1800.0;
  std::string per_seed;
  for (int s : gen.successes_per_seed) per_seed += (per_seed.empty() ? "" : ",") + std::to_string(s);
  return {(bar || fallback) && min_gen >= 1 && in_time,
          "DA-MMP SR " + fmt("%.3f", sr) + " (>= 0.5" + (bar ? "" : "; fallback: plan-1 " + fmt("%.3f", plan1.mean_success_rate()) +
                                                                       ", plan-2 " + fmt("%.3f", plan2.mean_success_rate())) +
              "), r = " + fmt("%.1f", cfg.generalize_r) + " m successes per seed " + per_seed + " of " +
              std::to_string(cfg.eval_targets) + " (>= 1), min latent distance " + fmt("%.3f", gen.min_latent_distance) +
              ", training " + fmt("%.0f", train_seconds) + " s (" + std::to_string(f.latent_steps) +
              " steps) + evaluation " + fmt("%.0f", eval_seconds) + " s (<= 1800)"};
}

Verdict no_ae_ablation(Context& ctx, double budget) {
  const ExperimentConfig& cfg = ctx.cfg;
  Flows& f = flows(ctx, budget);
  const auto res = ablate_no_ae(cfg, *ctx.ae, f.latent, f.raw, cfg.n_unconditional, cfg.cfm.n_steps, cfg.seed);
  return {res.with_ae.mean_squared_jerk < res.raw.mean_squared_jerk,
          "mean squared jerk with AE " + fmt("%.4g", res.with_ae.mean_squared_jerk) + " < without " +
              fmt("%.4g", res.raw.mean_squared_jerk) + " over " + std::to_string(cfg.n_unconditional) +
              " samples each; limit violations " + fmt("%.2f", res.with_ae.limit_violation_rate) + " vs " +
              fmt("%.2f", res.raw.limit_violation_rate) + ", invalid lengths " +
              std::to_string(res.with_ae.invalid_length) + " vs " + std::to_string(res.raw.invalid_length)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-9"};
  std::string config = default_experiment_config_path();
  std::string cache_root;
  std::vector<int> only;
  bool strict = false;
  double flow_budget = 1200.0;
  app.add_option("--config", config, "experiment INI file")->check(CLI::ExistingFile);
  app.add_option("--cache", cache_root, "artifact cache directory (empty: no caching)");
  app.add_option("--only", only, "criteria to run");
  app.add_option("--flow-budget", flow_budget, "flow training wall-clock budget in seconds");
  app.add_flag("--strict", strict, "exit with status 1 when any criterion fails");
  CLI11_PARSE(app, argc, argv);

  Context ctx{load_experiment_config(config), Cache(cache_root, ""), std::nullopt, std::nullopt};
  ctx.cache = Cache(cache_root, ctx.cfg.hash);
  if (ctx.cache.enabled()) note("artifact cache " + ctx.cache.path(""));

  const std::vector<std::function<Verdict(Context&)>> criteria{
      planner_validity,
      ballistic_consistency,
      dimt_oracle,
      vmp_round_trip,
      gradient_check,
      table_iii_trend,
      table_i_drag_only,
      [&](Context& c) { return da_mmp(c, flow_budget); },
      [&](Context& c) { return no_ae_ablation(c, flow_budget); },
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(n)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      if ((n == 8 || n == 9) && !ctx.ae) table_iii_trend(ctx);
      v = criteria[i](ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %d: %s %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    note("criterion " + std::to_string(n) + " took " + fmt("%.1f", seconds_since(t0)) + " s");
  }
  return strict && failed > 0 ? 1 : 0;
}
