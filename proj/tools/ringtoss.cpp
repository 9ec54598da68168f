// Command-line front end: dataset collection, training, execution,
// evaluation and ablations. Exit codes: 0 ok, 2 validation failure,
// 3 configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ringtoss/collect.hpp"
#include "ringtoss/dataset_io.hpp"
#include "ringtoss/experiments.hpp"
#include "ringtoss/flow.hpp"
#include "ringtoss/kernels/gemm.hpp"
#include "ringtoss/manifold.hpp"

namespace fs = std::filesystem;
using namespace ringtoss;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config = default_experiment_config_path();
  std::string arm;
  std::string out = ".";
  std::optional<long> seed;
};

ExperimentConfig load(const Globals& g) {
  ExperimentConfig cfg = load_experiment_config(g.config, g.arm);
  if (g.seed) cfg.seed = static_cast<std::uint64_t>(*g.seed);
  return cfg;
}

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

void log(const std::string& msg) { std::cerr << msg << std::endl; }

GapModel pick_gap(const ExperimentConfig& cfg, const std::string& name) {
  if (name == "default") return cfg.gap;
  if (name == "drag_only" || name == "drag-only") return cfg.gap_drag_only;
  if (name == "none") return GapModel::none();
  throw ConfigError("unknown gap '" + name + "' (expected default, drag_only or none)");
}

nn::Json training_meta(const std::string& dataset_hash, std::uint64_t seed, int epochs, const nn::AdamConfig& adam) {
  return {{"dataset_hash", dataset_hash}, {"seed", seed}, {"epochs", epochs}, {"optimizer", nn::to_json(adam)}};
}

Autoencoder load_ae(const std::string& path) { return autoencoder_from_json(nn::read_json_file(path)); }
FlowModel load_flow(const std::string& path) { return flow_from_json(nn::read_json_file(path)); }

void write_json(const std::string& path, const nn::Json& j) {
  nn::write_json_file(path, j);
  log("wrote " + path);
}

// ---------------------------------------------------------------- collect

struct CollectArgs {
  int n = -1;
  int workers = -1;
  std::vector<double> range;
  std::string file = "dataset.jsonl";
};

int run_collect(const Globals& g, const CollectArgs& a) {
  const ExperimentConfig cfg = load(g);
  CollectOptions opts;
  opts.n = a.n >= 0 ? a.n : cfg.n_collect;
  opts.workers = a.workers > 0 ? a.workers : cfg.workers;
  opts.seed = cfg.seed;
  opts.r = cfg.r_plan;
  if (!a.range.empty()) {
    if (a.range.size() != 2 || !(a.range[0] <= a.range[1])) throw ConfigError("--range expects MIN MAX");
    opts.r = {a.range[0], a.range[1]};
  }
  const long step = std::max(1, opts.n / 20);
  opts.progress = [&](long done) {
    if (done % step == 0) log("collected " + std::to_string(done) + "/" + std::to_string(opts.n));
  };
  const auto t0 = std::chrono::steady_clock::now();
  const CollectResult res = collect(cfg.world, opts);
  std::vector<ParamRecord> records;
  for (const auto& it : res.items) records.push_back(it.record);
  const std::string data_path = out_path(g, a.file);
  write_params_jsonl(data_path, records);
  log("wrote " + data_path);
  nn::Json stats = res.stats.to_json();
  stats["n"] = opts.n;
  stats["seed"] = cfg.seed;
  stats["r_min"] = opts.r.min;
  stats["r_max"] = opts.r.max;
  stats["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stats["file_hash"] = file_hash(data_path);
  write_json(out_path(g, fs::path(a.file).stem().string() + "_stats.json"), stats);
  return 0;
}

// ---------------------------------------------------------------- train-ae

struct TrainAeArgs {
  std::string data;
  std::string holdout;
  int epochs = -1;
  double time_budget = -1.0;
};

int run_train_ae(const Globals& g, const TrainAeArgs& a) {
  ExperimentConfig cfg = load(g);
  if (a.epochs > 0) cfg.ae.max_epochs = a.epochs;
  if (a.time_budget >= 0.0) cfg.ae.time_budget = a.time_budget;
  const auto records = read_params_jsonl(a.data);
  const nn::Matrix x = params_matrix(records);
  const auto trained = train_autoencoder(x, cfg.ae, cfg.seed, [](int epoch, double tr, double va) {
    if (epoch % 50 == 0) log("epoch " + std::to_string(epoch) + " train " + std::to_string(tr) + " val " + std::to_string(va));
  });
  if (!trained) {
    throw ValidationFailure("dataset has " + std::to_string(trained.error().size) + " records; at least " +
                            std::to_string(kMinAeDataset) + " are required");
  }
  const auto& t = trained.value();
  nn::Json ckpt = to_json(t.model);
  ckpt["training"] = training_meta(file_hash(a.data), cfg.seed, t.curve.epochs_run, cfg.ae.adam);
  ckpt["training"]["best_epoch"] = t.curve.best_epoch;
  write_json(out_path(g, "ae.json"), ckpt);

  const nn::Matrix eval = a.holdout.empty() ? x : params_matrix(read_params_jsonl(a.holdout));
  const auto m = reconstruction_metrics(t.model, eval);
  write_json(out_path(g, "ae_metrics.json"), {{"rmse", m.rmse_normalized},
                                              {"lre", m.lre_percent},
                                              {"dataset_size", x.rows()},
                                              {"evaluation_size", eval.rows()},
                                              {"evaluation", a.holdout.empty() ? "training" : "holdout"},
                                              {"seed", cfg.seed}});
  std::ofstream curve(out_path(g, "ae_curve.csv"));
  curve << "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < t.curve.train_loss.size(); ++e) {
    curve << e << ',' << t.curve.train_loss[e] << ',' << t.curve.val_loss[e] << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- execute

struct ExecuteArgs {
  std::string data;
  std::string ae;
  std::string flow;
  std::string gap = "default";
  int count = 10;
  std::vector<double> range;
  double guidance = -1.0;
  int steps = -1;
  std::string file = "executions.jsonl";
};

int run_execute(const Globals& g, const ExecuteArgs& a) {
  const ExperimentConfig cfg = load(g);
  const GapModel gap = pick_gap(cfg, a.gap);
  std::vector<ExecutionRecord> log_records;
  if (!a.flow.empty()) {
    if (a.ae.empty()) throw ConfigError("--flow needs --ae");
    const Autoencoder ae = load_ae(a.ae);
    const FlowModel flow = load_flow(a.flow);
    Range r = cfg.r_exec;
    if (!a.range.empty()) {
      if (a.range.size() != 2) throw ConfigError("--range expects MIN MAX");
      r = {a.range[0], a.range[1]};
    }
    const EvalStreams streams(cfg.seed, 0, gap);
    Rng target_rng = streams.targets();
    const auto targets = draw_targets(target_rng, r, a.count);
    if (!targets.empty()) {
      nn::Matrix c(static_cast<Eigen::Index>(targets.size()), kConditionDim);
      for (std::size_t i = 0; i < targets.size(); ++i) c.row(static_cast<Eigen::Index>(i)) << targets[i].x, targets[i].y;
      Rng sampler = streams.sampler();
      const nn::Matrix z = sample_conditional(flow, c, a.steps > 0 ? a.steps : cfg.cfm.n_steps,
                                              a.guidance >= 0.0 ? a.guidance : flow.guidance, sampler);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto gen = decode_throw(z.row(static_cast<Eigen::Index>(i)).transpose(), &ae, cfg.world.basis,
                                      cfg.world.planner.f_ctrl);
        ExecutionRecord rec;
        rec.index = static_cast<long>(i);
        rec.target = targets[i];
        if (gen) {
          Rng exec = streams.execution(static_cast<int>(i), 0);
          rec = execute_throw(cfg, gen->trajectory, targets[i], gap, exec, static_cast<long>(i));
          rec.params = gen->params;
        }
        log_records.push_back(rec);
      }
    }
  } else {
    if (a.data.empty()) throw ConfigError("execute needs --data or --flow/--ae");
    const auto records = read_params_jsonl(a.data);
    std::optional<Autoencoder> ae;
    if (!a.ae.empty()) ae = load_ae(a.ae);
    log_records = execute_records(cfg, records, gap, cfg.seed, ae ? &*ae : nullptr);
  }
  const std::string path = out_path(g, a.file);
  write_execution_log(path, log_records, true);
  write_landing_csv(out_path(g, fs::path(a.file).stem().string() + "_landings.csv"), log_records);
  long hits = 0, landed = 0;
  for (const auto& r : log_records) {
    hits += r.success ? 1 : 0;
    landed += r.landed ? 1 : 0;
  }
  log("appended " + std::to_string(log_records.size()) + " records to " + path + " (" + std::to_string(landed) +
      " landed, " + std::to_string(hits) + " hits)");
  return 0;
}

// ---------------------------------------------------------------- train-cfm

struct TrainCfmArgs {
  std::string ae;
  std::string log;
  int epochs = -1;
  double time_budget = -1.0;
  bool raw = false;
  std::string file;
};

int run_train_cfm(const Globals& g, const TrainCfmArgs& a) {
  ExperimentConfig cfg = load(g);
  if (a.epochs > 0) cfg.cfm.epochs = a.epochs;
  if (a.time_budget >= 0.0) cfg.cfm.time_budget = a.time_budget;
  const Autoencoder ae = load_ae(a.ae);
  FlowData data;
  std::string data_hash;
  if (a.log.empty()) {
    log("no --log given: planning and executing " + std::to_string(cfg.n_flow_data) + " throws under the default gap");
    data = build_flow_data(cfg, ae, cfg.gap, cfg.n_flow_data, mix_seed(cfg.seed, 0xF1));
    const std::string path = out_path(g, "flow_executions.jsonl");
    write_execution_log(path, data.executions);
    log("wrote " + path);
    data_hash = file_hash(path);
  } else {
    data = flow_data_from_log(read_execution_log(a.log), ae);
    data_hash = file_hash(a.log);
  }
  const nn::Matrix& x = a.raw ? data.raw : data.latents;
  const auto trained = train_flow(x, data.conditions, cfg.cfm, cfg.seed, a.raw, [](int step, double loss) {
    if (step % 500 == 0) log("step " + std::to_string(step) + " loss " + std::to_string(loss));
  });
  nn::Json ckpt = to_json(trained.model);
  ckpt["training"] = training_meta(data_hash, cfg.seed, trained.steps, cfg.cfm.adam);
  ckpt["training"]["variant"] = a.raw ? "raw" : "latent";
  ckpt["training"]["items"] = x.rows();
  write_json(out_path(g, a.file.empty() ? (a.raw ? "flow_raw.json" : "flow.json") : a.file), ckpt);
  std::ofstream curve(out_path(g, a.raw ? "flow_raw_curve.csv" : "flow_curve.csv"));
  curve << "step,loss\n";
  for (std::size_t s = 0; s < trained.loss.size(); ++s) curve << s << ',' << trained.loss[s] << '\n';
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string method = "plan1";
  std::string gap = "default";
  std::string ae;
  std::string flow;
  int seeds = -1;
  int targets = -1;
  double guidance = -1.0;
  int steps = -1;
};

int run_evaluate(const Globals& g, const EvaluateArgs& a) {
  const ExperimentConfig cfg = load(g);
  const Method method = parse_method(a.method);
  const GapModel gap = pick_gap(cfg, a.gap);
  std::optional<Autoencoder> ae;
  std::optional<FlowModel> flow;
  GenerativeModels models;
  if (method == Method::DaMmp) {
    if (a.ae.empty() || a.flow.empty()) throw ConfigError("da-mmp evaluation needs --ae and --flow");
    ae = load_ae(a.ae);
    flow = load_flow(a.flow);
    models = {&*ae, &*flow, a.guidance >= 0.0 ? a.guidance : flow->guidance, a.steps > 0 ? a.steps : cfg.cfm.n_steps};
  }
  const EvalReport rep = evaluate(cfg, method, gap, a.gap, cfg.r_exec, a.seeds > 0 ? a.seeds : cfg.eval_seeds,
                                  a.targets > 0 ? a.targets : cfg.eval_targets, models);
  const std::string stem = "eval_" + to_string(method) + "_" + a.gap;
  write_json(out_path(g, stem + ".json"), rep.to_json());
  write_landing_csv(out_path(g, stem + ".csv"), rep.final_landings());
  std::printf("%s (%s gap): mean SR %.3f\n", to_string(method).c_str(), a.gap.c_str(), rep.mean_success_rate());
  return 0;
}

// ---------------------------------------------------------------- ablate-scale

struct ScaleArgs {
  std::string data;
  std::string holdout;
  std::vector<int> sizes;
};

int run_ablate_scale(const Globals& g, const ScaleArgs& a) {
  const ExperimentConfig cfg = load(g);
  std::vector<int> sizes = a.sizes.empty() ? std::vector<int>{cfg.n_small, cfg.n_collect} : a.sizes;
  const int largest = *std::max_element(sizes.begin(), sizes.end());
  auto gather = [&](const std::string& path, int n, std::uint64_t seed) {
    if (!path.empty()) return read_params_jsonl(path);
    log("collecting " + std::to_string(n) + " trajectories (seed " + std::to_string(seed) + ")");
    CollectOptions opts;
    opts.n = n;
    opts.r = cfg.r_plan;
    opts.seed = seed;
    opts.workers = cfg.workers;
    std::vector<ParamRecord> out;
    for (auto& it : collect(cfg.world, opts).items) out.push_back(it.record);
    return out;
  };
  const auto data = gather(a.data, largest, cfg.seed);
  const auto holdout = gather(a.holdout, cfg.n_holdout, mix_seed(cfg.seed, 0x401D));
  const auto rows = ablate_scale(cfg, data, holdout, sizes, cfg.seed);
  nn::Json rep = to_json(rows);
  rep["holdout_size"] = holdout.size();
  rep["seed"] = cfg.seed;
  write_json(out_path(g, "ablate_scale.json"), rep);
  for (const auto& r : rows) {
    std::printf("size %6d  rmse %.4f  lre %.2f%%\n", r.size, r.metrics.rmse_normalized, r.metrics.lre_percent);
  }
  return 0;
}

// ---------------------------------------------------------------- ablate-no-ae

struct NoAeArgs {
  std::string ae;
  std::string flow;
  std::string raw_flow;
  std::string log;
  int samples = -1;
  int steps = -1;
};

int run_ablate_no_ae(const Globals& g, const NoAeArgs& a) {
  const ExperimentConfig cfg = load(g);
  const Autoencoder ae = load_ae(a.ae);
  const FlowModel flow = load_flow(a.flow);
  FlowModel raw;
  if (!a.raw_flow.empty()) {
    raw = load_flow(a.raw_flow);
  } else {
    if (a.log.empty()) throw ConfigError("ablate-no-ae needs --raw-flow or --log to train the raw variant");
    const FlowData data = flow_data_from_log(read_execution_log(a.log), ae);
    log("training the raw-parameter flow on " + std::to_string(data.raw.rows()) + " items");
    raw = train_flow(data.raw, data.conditions, cfg.cfm, cfg.seed, true).model;
    write_json(out_path(g, "flow_raw.json"), to_json(raw));
  }
  const auto res = ablate_no_ae(cfg, ae, flow, raw, a.samples > 0 ? a.samples : cfg.n_unconditional,
                                a.steps > 0 ? a.steps : cfg.cfm.n_steps, cfg.seed);
  write_json(out_path(g, "ablate_no_ae.json"), res.to_json());
  write_profiles_csv(out_path(g, "profiles_ae.csv"), res.with_ae.trajectories, 5);
  write_profiles_csv(out_path(g, "profiles_no_ae.csv"), res.raw.trajectories, 5);
  std::printf("mean squared jerk: with AE %.4g, without %.4g\n", res.with_ae.mean_squared_jerk, res.raw.mean_squared_jerk);
  return 0;
}

// ---------------------------------------------------------------- generalize

struct GeneralizeArgs {
  std::string ae;
  std::string flow;
  std::string log;
  double r = -1.0;
  int seeds = -1;
  int throws = -1;
  double guidance = -1.0;
  int steps = -1;
};

int run_generalize(const Globals& g, const GeneralizeArgs& a) {
  const ExperimentConfig cfg = load(g);
  const Autoencoder ae = load_ae(a.ae);
  const FlowModel flow = load_flow(a.flow);
  nn::Matrix latents(0, ae.latent_width());
  if (!a.log.empty()) latents = flow_data_from_log(read_execution_log(a.log), ae).latents;
  const GenerativeModels models{&ae, &flow, a.guidance >= 0.0 ? a.guidance : flow.guidance,
                                a.steps > 0 ? a.steps : cfg.cfm.n_steps};
  const auto rep = evaluate_generalization(cfg, models, latents, a.r > 0.0 ? a.r : cfg.generalize_r,
                                           a.seeds > 0 ? a.seeds : cfg.eval_seeds,
                                           a.throws > 0 ? a.throws : cfg.eval_targets);
  nn::Json j = rep.to_json();
  if (latents.rows() == 0) j.erase("min_latent_distance"), j.erase("mean_latent_distance");
  write_json(out_path(g, "generalize.json"), j);
  write_landing_csv(out_path(g, "generalize_landings.csv"), rep.landings);
  std::printf("r = %.2f m: successes per seed", rep.r);
  for (int s : rep.successes_per_seed) std::printf(" %d/%d", s, rep.throws_per_seed);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-conditioned ring-toss trajectory toolkit"};
  app.require_subcommand(1);
  Globals g;
  long seed = 0;
  app.add_option("--config", g.config, "experiment INI file")->check(CLI::ExistingFile);
  app.add_option("--arm", g.arm, "arm description file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  std::string isa;
  app.add_option("--isa", isa, "GEMM kernel: scalar, avx2 or avx512 (default: best available)");

  CollectArgs ca;
  auto* collect_cmd = app.add_subcommand("collect", "plan and fit a trajectory dataset");
  collect_cmd->add_option("--n", ca.n, "number of trajectories");
  collect_cmd->add_option("--workers", ca.workers, "worker threads");
  collect_cmd->add_option("--range", ca.range, "target radius MIN MAX")->expected(2);
  collect_cmd->add_option("--file", ca.file, "dataset file name inside --out");

  TrainAeArgs ta;
  auto* ae_cmd = app.add_subcommand("train-ae", "train the trajectory autoencoder");
  ae_cmd->add_option("--data", ta.data, "JSON-lines parameter dataset")->required()->check(CLI::ExistingFile);
  ae_cmd->add_option("--holdout", ta.holdout, "held-out dataset for the metrics report")->check(CLI::ExistingFile);
  ae_cmd->add_option("--epochs", ta.epochs, "epoch cap");
  ae_cmd->add_option("--time-budget", ta.time_budget, "wall-clock cap in seconds");

  ExecuteArgs ea;
  auto* exec_cmd = app.add_subcommand("execute", "execute trajectories under a dynamics gap");
  exec_cmd->add_option("--data", ea.data, "parameter dataset to execute at its own targets")->check(CLI::ExistingFile);
  exec_cmd->add_option("--ae", ea.ae, "autoencoder checkpoint (round-trip or generator)")->check(CLI::ExistingFile);
  exec_cmd->add_option("--flow", ea.flow, "flow checkpoint: generate instead of reading --data")->check(CLI::ExistingFile);
  exec_cmd->add_option("--gap", ea.gap, "default, drag_only or none");
  exec_cmd->add_option("--count", ea.count, "generated targets");
  exec_cmd->add_option("--range", ea.range, "generated target radius MIN MAX")->expected(2);
  exec_cmd->add_option("--guidance", ea.guidance, "guidance scale");
  exec_cmd->add_option("--steps", ea.steps, "sampler steps");
  exec_cmd->add_option("--file", ea.file, "execution log name inside --out");

  TrainCfmArgs tc;
  auto* cfm_cmd = app.add_subcommand("train-cfm", "train the conditional flow model");
  cfm_cmd->add_option("--ae", tc.ae, "autoencoder checkpoint")->required()->check(CLI::ExistingFile);
  cfm_cmd->add_option("--log", tc.log, "execution log with parameters (default: generate one)")->check(CLI::ExistingFile);
  cfm_cmd->add_option("--epochs", tc.epochs, "optimizer steps");
  cfm_cmd->add_option("--time-budget", tc.time_budget, "wall-clock cap in seconds");
  cfm_cmd->add_flag("--raw", tc.raw, "model raw parameter vectors instead of latents");
  cfm_cmd->add_option("--file", tc.file, "checkpoint name inside --out");

  EvaluateArgs va;
  auto* eval_cmd = app.add_subcommand("evaluate", "success-rate evaluation of a method");
  eval_cmd->add_option("--method", va.method, "da-mmp, plan1, plan2 or residual");
  eval_cmd->add_option("--gap", va.gap, "default, drag_only or none");
  eval_cmd->add_option("--ae", va.ae, "autoencoder checkpoint")->check(CLI::ExistingFile);
  eval_cmd->add_option("--flow", va.flow, "flow checkpoint")->check(CLI::ExistingFile);
  eval_cmd->add_option("--seeds", va.seeds, "evaluation seeds");
  eval_cmd->add_option("--targets", va.targets, "targets per seed");
  eval_cmd->add_option("--guidance", va.guidance, "guidance scale");
  eval_cmd->add_option("--steps", va.steps, "sampler steps");

  ScaleArgs sa;
  auto* scale_cmd = app.add_subcommand("ablate-scale", "autoencoder reconstruction versus dataset size");
  scale_cmd->add_option("--data", sa.data, "training dataset (default: collect)")->check(CLI::ExistingFile);
  scale_cmd->add_option("--holdout", sa.holdout, "held-out dataset (default: collect)")->check(CLI::ExistingFile);
  scale_cmd->add_option("--sizes", sa.sizes, "dataset sizes");

  NoAeArgs na;
  auto* noae_cmd = app.add_subcommand("ablate-no-ae", "flow on latents versus raw parameters");
  noae_cmd->add_option("--ae", na.ae, "autoencoder checkpoint")->required()->check(CLI::ExistingFile);
  noae_cmd->add_option("--flow", na.flow, "latent flow checkpoint")->required()->check(CLI::ExistingFile);
  noae_cmd->add_option("--raw-flow", na.raw_flow, "raw-parameter flow checkpoint")->check(CLI::ExistingFile);
  noae_cmd->add_option("--log", na.log, "execution log used to train the raw flow")->check(CLI::ExistingFile);
  noae_cmd->add_option("--samples", na.samples, "unconditional samples per variant");
  noae_cmd->add_option("--steps", na.steps, "sampler steps");

  GeneralizeArgs ga;
  auto* gen_cmd = app.add_subcommand("generalize", "success at an unseen distance");
  gen_cmd->add_option("--ae", ga.ae, "autoencoder checkpoint")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--flow", ga.flow, "flow checkpoint")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--log", ga.log, "flow training log (for nearest-latent distances)")->check(CLI::ExistingFile);
  gen_cmd->add_option("--r", ga.r, "target radius");
  gen_cmd->add_option("--seeds", ga.seeds, "seeds");
  gen_cmd->add_option("--throws", ga.throws, "throws per seed");
  gen_cmd->add_option("--guidance", ga.guidance, "guidance scale");
  gen_cmd->add_option("--steps", ga.steps, "sampler steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (!isa.empty()) {
      try {
        kernels::set_active_isa(kernels::parse_isa(isa));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (*collect_cmd) return run_collect(g, ca);
    if (*ae_cmd) return run_train_ae(g, ta);
    if (*exec_cmd) return run_execute(g, ea);
    if (*cfm_cmd) return run_train_cfm(g, tc);
    if (*eval_cmd) return run_evaluate(g, va);
    if (*scale_cmd) return run_ablate_scale(g, sa);
    if (*noae_cmd) return run_ablate_no_ae(g, na);
    if (*gen_cmd) return run_generalize(g, ga);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CollectionAborted& e) {
    std::cerr << "collection aborted: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NonFiniteLoss& e) {
    std::cerr << "training diverged: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const FormatError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nn::Json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ShapeMismatch& e) {
    std::cerr << "shape mismatch: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
