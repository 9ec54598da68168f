#include "ringtoss/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace ringtoss {

EvalStreams::EvalStreams(std::uint64_t experiment_seed, int seed_index, const GapModel& gap)
    : master(mix_seed(experiment_seed, 0xE7A1 + static_cast<std::uint64_t>(seed_index))),
      gap_seed(mix_seed(gap.seed, master)) {}

std::vector<Target> draw_targets(Rng& rng, const Range& r, int count) {
  std::vector<Target> out;
  for (int i = 0; i < count; ++i) out.push_back({uniform(rng, r.min, r.max), 0.0});
  return out;
}

ExecutionRecord execute_throw(const ExperimentConfig& cfg, const Trajectory& traj, const Target& target,
                              const GapModel& gap, Rng& rng, long index) {
  const auto& w = cfg.world;
  const auto outcome = execute(traj, target, w.arm, w.geometry, gap, rng);
  return to_execution_record(index, target, outcome, ThrowState{});
}

std::vector<ExecutionRecord> execute_records(const ExperimentConfig& cfg, const std::vector<ParamRecord>& records,
                                             const GapModel& gap, std::uint64_t seed, const Autoencoder* ae) {
  std::vector<ExecutionRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    TrajectoryParams p = records[i].params;
    if (ae) p = unflatten(ae->decode(ae->encode(flatten(p))), cfg.world.basis.size());
    Rng rng = make_rng(mix_seed(gap.seed, seed), i);
    const auto traj = reconstruct(p, cfg.world.basis, cfg.world.planner.f_ctrl);
    ExecutionRecord rec;
    if (traj) {
      rec = execute_throw(cfg, *traj, records[i].target, gap, rng, static_cast<long>(i));
    } else {
      rec.index = static_cast<long>(i);
      rec.target = records[i].target;
    }
    rec.params = p;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::DaMmp: return "da-mmp";
    case Method::Plan1: return "plan1";
    case Method::Plan2: return "plan2";
    case Method::Residual: return "residual";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "da-mmp" || name == "dammp") return Method::DaMmp;
  if (name == "plan1") return Method::Plan1;
  if (name == "plan2") return Method::Plan2;
  if (name == "residual") return Method::Residual;
  throw ConfigError("unknown method '" + name + "' (expected da-mmp, plan1, plan2 or residual)");
}

double SeedReport::success_rate() const {
  if (throws.empty()) return 0.0;
  long ok = 0;
  for (const auto& t : throws) ok += t.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(throws.size());
}

double EvalReport::mean_success_rate() const {
  if (seeds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : seeds) s += r.success_rate();
  return s / static_cast<double>(seeds.size());
}

std::vector<ExecutionRecord> EvalReport::final_landings() const {
  std::vector<ExecutionRecord> out;
  for (const auto& s : seeds) {
    for (const auto& t : s.throws) {
      if (t.attempts.empty()) continue;
      ExecutionRecord r = t.attempts.back();
      r.target = t.target;
      r.success = t.success;
      r.params.reset();
      out.push_back(r);
    }
  }
  return out;
}

nn::Json EvalReport::to_json() const {
  nn::Json per_seed = nn::Json::array();
  for (const auto& s : seeds) {
    nn::Json throws = nn::Json::array();
    for (const auto& t : s.throws) {
      nn::Json attempts = nn::Json::array();
      for (const auto& a : t.attempts) {
        attempts.push_back({{"aim_x", a.target.x}, {"aim_y", a.target.y}, {"landed", a.landed},
                            {"x_exe", a.x_exe}, {"y_exe", a.y_exe}});
      }
      throws.push_back({{"target_x", t.target.x}, {"target_y", t.target.y}, {"success", t.success},
                        {"limit_violation", t.limit_violation}, {"attempts", attempts}});
    }
    per_seed.push_back({{"seed_index", s.seed_index}, {"success_rate", s.success_rate()}, {"throws", throws}});
  }
  return {{"method", ringtoss::to_string(method)},
          {"gap", gap_name},
          {"r_min", range.min},
          {"r_max", range.max},
          {"mean_success_rate", mean_success_rate()},
          {"seeds", per_seed}};
}

namespace {

bool hits(const ExecutionRecord& r, const Target& target, const TaskGeometry& geom) {
  return r.landed && landing_success(r.x_exe, r.y_exe, target, geom);
}

// One planned throw aimed at `aim`, scored against `target`.
std::optional<ExecutionRecord> planned_attempt(const ExperimentConfig& cfg, const Target& aim, const Target& target,
                                               const GapModel& gap, Rng plan_rng, Rng exec_rng, long index) {
  StageStats stats;
  const auto planned = plan_throw(cfg.world, aim, plan_rng, stats, cfg.world.max_draws_per_item);
  if (!planned) return std::nullopt;
  ExecutionRecord r = execute_throw(cfg, planned->trajectory, aim, gap, exec_rng, index);
  r.success = hits(r, target, cfg.world.geometry);
  return r;
}

ExecutionRecord failed_attempt(const Target& aim, long index) {
  ExecutionRecord r;
  r.index = index;
  r.target = aim;
  return r;
}

}  // namespace

EvalReport evaluate(const ExperimentConfig& cfg, Method method, const GapModel& gap, const std::string& gap_name,
                    const Range& r, int seeds, int targets, const GenerativeModels& models) {
  if (method == Method::DaMmp && (!models.ae || !models.flow)) {
    throw DomainError("evaluate: da-mmp needs a trained autoencoder and flow model");
  }
  EvalReport report;
  report.method = method;
  report.gap_name = gap_name;
  report.range = r;
  const auto& geom = cfg.world.geometry;
  for (int s = 0; s < seeds; ++s) {
    const EvalStreams streams(cfg.seed, s, gap);
    Rng target_rng = streams.targets();
    const auto goals = draw_targets(target_rng, r, targets);
    SeedReport sr;
    sr.seed_index = s;

    if (method == Method::DaMmp) {
      nn::Matrix c(targets, kConditionDim);
      for (int i = 0; i < targets; ++i) c.row(i) << goals[static_cast<std::size_t>(i)].x, goals[static_cast<std::size_t>(i)].y;
      Rng sampler = streams.sampler();
      const nn::Matrix z = sample_conditional(*models.flow, c, models.n_steps, models.guidance, sampler);
      for (int i = 0; i < targets; ++i) {
        const Target& t = goals[static_cast<std::size_t>(i)];
        ThrowOutcome out{t, {}, false, false};
        const auto g = decode_throw(z.row(i).transpose(), models.ae, cfg.world.basis, cfg.world.planner.f_ctrl);
        if (g) {
          out.limit_violation = !within_joint_limits(g->trajectory, cfg.world.arm);
          Rng exec = streams.execution(i, 0);
          out.attempts.push_back(execute_throw(cfg, g->trajectory, t, gap, exec, i));
          out.success = hits(out.attempts.back(), t, geom);
        } else {
          out.attempts.push_back(failed_attempt(t, i));
        }
        sr.throws.push_back(std::move(out));
      }
      report.seeds.push_back(std::move(sr));
      continue;
    }

    for (int i = 0; i < targets; ++i) {
      const Target& t = goals[static_cast<std::size_t>(i)];
      ThrowOutcome out{t, {}, false, false};
      const auto first = planned_attempt(cfg, t, t, gap, streams.planner(i, 0), streams.execution(i, 0), i);
      out.attempts.push_back(first ? *first : failed_attempt(t, i));
      out.success = first && first->success;
      if (!out.success && method == Method::Plan2) {
        const auto second = planned_attempt(cfg, t, t, gap, streams.planner(i, 1), streams.execution(i, 1), i);
        out.attempts.push_back(second ? *second : failed_attempt(t, i));
        out.success = second && second->success;
      } else if (!out.success && method == Method::Residual && first && first->landed) {
        // Aim off by the observed miss, reusing the first throw's planner stream.
        const Target aim{2.0 * t.x - first->x_exe, 2.0 * t.y - first->y_exe};
        const auto second = planned_attempt(cfg, aim, t, gap, streams.planner(i, 0), streams.execution(i, 1), i);
        out.attempts.push_back(second ? *second : failed_attempt(aim, i));
        out.success = second && second->success;
      }
      sr.throws.push_back(std::move(out));
    }
    report.seeds.push_back(std::move(sr));
  }
  return report;
}

FlowData flow_data_from_log(const std::vector<ExecutionRecord>& log, const Autoencoder& ae) {
  FlowData d;
  std::vector<TrajectoryParams> params;
  std::vector<const ExecutionRecord*> kept;
  for (const auto& r : log) {
    if (!r.landed || !r.params) continue;
    kept.push_back(&r);
    params.push_back(*r.params);
  }
  if (kept.empty()) throw DomainError("flow data: no landed executions with parameters");
  d.raw = params_matrix(params);
  d.latents = ae.encode(d.raw);
  d.conditions.resize(static_cast<Eigen::Index>(kept.size()), kConditionDim);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    d.conditions.row(static_cast<Eigen::Index>(i)) << kept[i]->x_exe, kept[i]->y_exe;
    d.executions.push_back(*kept[i]);
  }
  return d;
}

FlowData build_flow_data(const ExperimentConfig& cfg, const Autoencoder& ae, const GapModel& gap, int n,
                         std::uint64_t seed) {
  CollectOptions opts;
  opts.n = n;
  opts.r = cfg.r_exec;
  opts.seed = seed;
  opts.workers = cfg.workers;
  const auto collected = collect(cfg.world, opts);
  std::vector<ParamRecord> planned;
  for (const auto& it : collected.items) planned.push_back(it.record);
  FlowData d = flow_data_from_log(execute_records(cfg, planned, gap, seed, &ae), ae);
  d.planned = std::move(planned);
  return d;
}

nn::Json GeneralizationReport::to_json() const {
  int total = 0;
  for (int s : successes_per_seed) total += s;
  return {{"r", r},
          {"throws_per_seed", throws_per_seed},
          {"successes_per_seed", successes_per_seed},
          {"success_rate", throws_per_seed > 0 ? static_cast<double>(total) /
                                                     static_cast<double>(throws_per_seed * successes_per_seed.size())
                                               : 0.0},
          {"min_latent_distance", min_latent_distance},
          {"mean_latent_distance", mean_latent_distance}};
}

GeneralizationReport evaluate_generalization(const ExperimentConfig& cfg, const GenerativeModels& models,
                                             const nn::Matrix& training_latents, double r, int seeds, int throws) {
  if (!models.ae || !models.flow) throw DomainError("generalize: needs trained models");
  GeneralizationReport rep;
  rep.r = r;
  rep.throws_per_seed = throws;
  rep.min_latent_distance = std::numeric_limits<double>::infinity();
  double dist_sum = 0.0;
  long dist_n = 0;
  const GapModel& gap = cfg.gap;
  for (int s = 0; s < seeds; ++s) {
    const EvalStreams streams(mix_seed(cfg.seed, 0x6E4E), s, gap);
    const Target t{r, 0.0};
    nn::Matrix c(throws, kConditionDim);
    for (int i = 0; i < throws; ++i) c.row(i) << t.x, t.y;
    Rng sampler = streams.sampler();
    const nn::Matrix z = sample_conditional(*models.flow, c, models.n_steps, models.guidance, sampler);
    int ok = 0;
    for (int i = 0; i < throws; ++i) {
      const nn::Vector zi = z.row(i).transpose();
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < training_latents.rows(); ++k) {
        nearest = std::min(nearest, (training_latents.row(k).transpose() - zi).norm());
      }
      rep.min_latent_distance = std::min(rep.min_latent_distance, nearest);
      dist_sum += nearest;
      ++dist_n;
      const auto g = decode_throw(zi, models.ae, cfg.world.basis, cfg.world.planner.f_ctrl);
      ExecutionRecord rec = failed_attempt(t, s * throws + i);
      if (g) {
        Rng exec = streams.execution(i, 0);
        rec = execute_throw(cfg, g->trajectory, t, gap, exec, s * throws + i);
      }
      ok += rec.success ? 1 : 0;
      rep.landings.push_back(rec);
    }
    rep.successes_per_seed.push_back(ok);
  }
  rep.mean_latent_distance = dist_n > 0 ? dist_sum / static_cast<double>(dist_n) : 0.0;
  return rep;
}

double mean_squared_jerk(const Trajectory& traj) {
  const auto& x = traj.samples;
  if (x.size() < 4) return 0.0;
  const double dt3 = traj.dt * traj.dt * traj.dt;
  double sum = 0.0;
  for (std::size_t k = 0; k + 3 < x.size(); ++k) {
    sum += ((x[k + 3].q - 3.0 * x[k + 2].q + 3.0 * x[k + 1].q - x[k].q) / dt3).squaredNorm();
  }
  return sum / static_cast<double>((x.size() - 3) * kNumJoints);
}

bool within_joint_limits(const Trajectory& traj, const ArmModel& arm) {
  for (const auto& s : traj.samples) {
    if (!s.q.allFinite() || !s.qdot.allFinite()) return false;
    for (int j = 0; j < kNumJoints; ++j) {
      if (s.q[j] < arm.q_min[j] - 1e-9 || s.q[j] > arm.q_max[j] + 1e-9) return false;
      if (std::abs(s.qdot[j]) > arm.v_max[j] + 1e-9) return false;
    }
  }
  return true;
}

namespace {

VariantStats score_variant(const ExperimentConfig& cfg, const nn::Matrix& samples, const Autoencoder* ae) {
  VariantStats v;
  v.samples = static_cast<int>(samples.rows());
  double jerk = 0.0;
  int violations = 0, scored = 0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const auto g = decode_throw(samples.row(i).transpose(), ae, cfg.world.basis, cfg.world.planner.f_ctrl);
    if (!g) {
      ++v.invalid_length;
      ++violations;
      continue;
    }
    jerk += mean_squared_jerk(g->trajectory);
    ++scored;
    if (!within_joint_limits(g->trajectory, cfg.world.arm)) ++violations;
    v.trajectories.push_back(g->trajectory);
  }
  v.mean_squared_jerk = scored > 0 ? jerk / scored : std::numeric_limits<double>::infinity();
  v.limit_violation_rate = v.samples > 0 ? static_cast<double>(violations) / v.samples : 0.0;
  return v;
}

nn::Json variant_json(const VariantStats& v) {
  return {{"mean_squared_jerk", v.mean_squared_jerk},
          {"limit_violation_rate", v.limit_violation_rate},
          {"invalid_length", v.invalid_length},
          {"samples", v.samples}};
}

}  // namespace

nn::Json NoAeAblation::to_json() const { return {{"with_ae", variant_json(with_ae)}, {"no_ae", variant_json(raw)}}; }

NoAeAblation ablate_no_ae(const ExperimentConfig& cfg, const Autoencoder& ae, const FlowModel& latent_flow,
                          const FlowModel& raw_flow, int n, int n_steps, std::uint64_t seed) {
  NoAeAblation out;
  Rng rng_ae = make_rng(seed, 0xAE), rng_raw = make_rng(seed, 0x4A);
  out.with_ae = score_variant(cfg, sample_unconditional(latent_flow, n, n_steps, rng_ae), &ae);
  out.raw = score_variant(cfg, sample_unconditional(raw_flow, n, n_steps, rng_raw), nullptr);
  return out;
}

void write_profiles_csv(const std::string& path, const std::vector<Trajectory>& trajs, int max_samples) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << "sample,t";
  for (int j = 1; j <= kNumJoints; ++j) out << ",q" << j;
  for (int j = 1; j <= kNumJoints; ++j) out << ",qd" << j;
  out << '\n';
  const int n = std::min<int>(max_samples, static_cast<int>(trajs.size()));
  for (int i = 0; i < n; ++i) {
    const auto& tr = trajs[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
      out << i << ',' << static_cast<double>(k) * tr.dt;
      for (int j = 0; j < kNumJoints; ++j) out << ',' << tr.samples[k].q[j];
      for (int j = 0; j < kNumJoints; ++j) out << ',' << tr.samples[k].qdot[j];
      out << '\n';
    }
  }
}

double decoded_length_valid_fraction(const Autoencoder& ae, const nn::Matrix& data, int basis_count) {
  if (data.rows() == 0) return 0.0;
  const nn::Matrix rec = ae.decode(ae.encode(data));
  long ok = 0;
  for (Eigen::Index i = 0; i < rec.rows(); ++i) {
    ok += std::lround(rec(i, rec.cols() - 1)) >= 2L * basis_count ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(rec.rows());
}

std::vector<ScaleRow> ablate_scale(const ExperimentConfig& cfg, const std::vector<ParamRecord>& data,
                                   const std::vector<ParamRecord>& holdout, const std::vector<int>& sizes,
                                   std::uint64_t seed, std::vector<Autoencoder>* models) {
  const nn::Matrix all = params_matrix(data);
  const nn::Matrix test = params_matrix(holdout);
  std::vector<ScaleRow> rows;
  for (int size : sizes) {
    if (size > all.rows()) throw DomainError("ablate-scale: requested size exceeds the dataset");
    const auto t0 = std::chrono::steady_clock::now();
    const auto trained = train_autoencoder(all.topRows(size), cfg.ae, seed);
    if (!trained) throw DomainError("ablate-scale: dataset of " + std::to_string(size) + " is too small");
    ScaleRow row;
    row.size = size;
    row.widths = scaled_widths(cfg.ae.hidden, size, cfg.ae.reference_size, cfg.ae.min_width);
    row.metrics = reconstruction_metrics(trained->model, test);
    row.length_valid_fraction = decoded_length_valid_fraction(trained->model, test, cfg.world.basis.size());
    row.epochs = trained->curve.epochs_run;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
    if (models) models->push_back(trained->model);
  }
  return rows;
}

nn::Json to_json(const std::vector<ScaleRow>& rows) {
  nn::Json out = nn::Json::array();
  for (const auto& r : rows) {
    out.push_back({{"dataset_size", r.size},
                   {"hidden_widths", r.widths},
                   {"rmse", r.metrics.rmse_normalized},
                   {"lre_percent", r.metrics.lre_percent},
                   {"length_valid_fraction", r.length_valid_fraction},
                   {"epochs", r.epochs},
                   {"seconds", r.seconds}});
  }
  return {{"rows", out}};
}

}  // namespace ringtoss
