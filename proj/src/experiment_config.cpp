#include "ringtoss/experiment_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringtoss/nn/checkpoint.hpp"

namespace ringtoss {

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<int> int_list(const IniConfig& cfg, const std::string& key, const std::vector<int>& fallback) {
  if (!cfg.has(key)) return fallback;
  std::vector<int> out;
  for (double v : cfg.get_doubles(key)) {
    if (v < 1.0 || v != std::floor(v)) throw ConfigError(key + ": widths must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Range range(const IniConfig& cfg, const std::string& key, Range fallback) {
  if (!cfg.has(key)) return fallback;
  const auto v = cfg.get_doubles(key);
  if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(key + ": expected an ordered pair min, max");
  return {v[0], v[1]};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!r_plan.contains(r_exec)) throw ConfigError("ranges: r_exec must lie inside r_plan");
  if (!(r_plan.min > 0.0)) throw ConfigError("ranges: radii must be positive");
  if (n_collect < 1 || n_small < 1 || n_holdout < 1 || n_flow_data < 1 || eval_seeds < 1 || eval_targets < 1 ||
      n_unconditional < 1 || workers < 1) {
    throw ConfigError("experiment: all counts must be positive");
  }
  if (world.draws_per_target < 1 || world.max_draws_per_item < world.draws_per_target) {
    throw ConfigError("data: draw budgets must be positive and ordered");
  }
  if (!(world.stability_threshold > 0.0)) throw ConfigError("stability: threshold must be positive");
  if (!(cfm.p_drop >= 0.0 && cfm.p_drop < 1.0)) throw ConfigError("cfm: p_drop must lie in [0, 1)");
  if (!(cfm.guidance >= 0.0)) throw ConfigError("cfm: guidance must be non-negative");
  if (ae.latent < 1 || ae.batch < 1 || ae.max_epochs < 1 || cfm.batch < 1 || cfm.epochs < 1 || cfm.n_steps < 1) {
    throw ConfigError("training: sizes and epoch counts must be positive");
  }
}

ExperimentConfig load_experiment_config(const IniConfig& cfg, const std::string& base_dir,
                                        const std::string& arm_override) {
  ExperimentConfig e;
  World& w = e.world;
  std::string arm = arm_override;
  if (arm.empty()) {
    arm = cfg.get_string("experiment.arm", std::string{});
    if (arm.empty()) {
      arm = bundled_config_dir() + "/default_arm.ini";
    } else if (fs::path(arm).is_relative()) {
      arm = (fs::path(base_dir) / arm).string();
    }
  }
  e.arm_path = arm;
  w.arm = load_arm(arm);
  w.geometry = load_geometry(cfg);
  w.sampling = load_goal_sampling(cfg);
  w.env = load_environment(cfg, w.geometry);
  w.planner = load_planner_config(cfg);
  w.basis = BasisConfig::uniform(static_cast<int>(cfg.get_int("vmp.basis_count", kDefaultBasisCount)));
  w.stability_threshold = cfg.get_double("stability.threshold", w.stability_threshold);
  w.draws_per_target = static_cast<int>(cfg.get_int("data.draws_per_target", w.draws_per_target));
  w.max_draws_per_item = static_cast<int>(cfg.get_int("data.max_draws_per_item", w.max_draws_per_item));

  e.r_plan = range(cfg, "ranges.r_plan", e.r_plan);
  e.r_exec = range(cfg, "ranges.r_exec", e.r_exec);
  e.gap = load_gap_model(cfg, "gap");
  e.gap_drag_only = load_gap_model(cfg, "gap_drag_only");

  AeConfig& ae = e.ae;
  ae.hidden = int_list(cfg, "ae.hidden", ae.hidden);
  ae.latent = static_cast<int>(cfg.get_int("ae.latent", ae.latent));
  ae.batch = static_cast<int>(cfg.get_int("ae.batch", ae.batch));
  ae.max_epochs = static_cast<int>(cfg.get_int("ae.max_epochs", ae.max_epochs));
  ae.patience = static_cast<int>(cfg.get_int("ae.patience", ae.patience));
  ae.val_fraction = cfg.get_double("ae.val_fraction", ae.val_fraction);
  ae.adam.lr = cfg.get_double("ae.lr", ae.adam.lr);
  ae.adam.weight_decay = cfg.get_double("ae.weight_decay", ae.adam.weight_decay);
  ae.reference_size = cfg.get_double("ae.reference_size", ae.reference_size);
  ae.min_width = static_cast<int>(cfg.get_int("ae.min_width", ae.min_width));
  ae.time_budget = cfg.get_double("ae.time_budget", ae.time_budget);

  FlowConfig& f = e.cfm;
  f.hidden = int_list(cfg, "cfm.hidden", f.hidden);
  f.p_drop = cfg.get_double("cfm.p_drop", f.p_drop);
  f.guidance = cfg.get_double("cfm.guidance", f.guidance);
  f.batch = static_cast<int>(cfg.get_int("cfm.batch", f.batch));
  f.epochs = static_cast<int>(cfg.get_int("cfm.epochs", f.epochs));
  f.adam.lr = cfg.get_double("cfm.lr", f.adam.lr);
  f.adam.weight_decay = cfg.get_double("cfm.weight_decay", f.adam.weight_decay);
  f.n_steps = static_cast<int>(cfg.get_int("cfm.steps", f.n_steps));
  f.time_budget = cfg.get_double("cfm.time_budget", f.time_budget);

  e.n_collect = static_cast<int>(cfg.get_int("data.n_collect", e.n_collect));
  e.n_small = static_cast<int>(cfg.get_int("data.n_small", e.n_small));
  e.n_holdout = static_cast<int>(cfg.get_int("data.n_holdout", e.n_holdout));
  e.n_flow_data = static_cast<int>(cfg.get_int("data.n_flow_data", e.n_flow_data));
  e.workers = static_cast<int>(cfg.get_int("data.workers", e.workers));
  e.eval_seeds = static_cast<int>(cfg.get_int("eval.seeds", e.eval_seeds));
  e.eval_targets = static_cast<int>(cfg.get_int("eval.targets", e.eval_targets));
  e.generalize_r = cfg.get_double("eval.generalize_r", e.generalize_r);
  e.n_unconditional = static_cast<int>(cfg.get_int("eval.unconditional", e.n_unconditional));
  e.seed = static_cast<std::uint64_t>(cfg.get_int("experiment.seed", static_cast<long>(e.seed)));
  e.validate();

  std::string text;
  if (cfg.source() != "<memory>") text = slurp(cfg.source());
  text += '\n' + slurp(arm);
  e.hash = nn::fnv1a_hex(text.data(), text.size());
  return e;
}

ExperimentConfig load_experiment_config(const std::string& path, const std::string& arm_override) {
  const IniConfig cfg = IniConfig::load(path);
  return load_experiment_config(cfg, fs::path(path).parent_path().string(), arm_override);
}

std::string default_experiment_config_path() { return bundled_config_dir() + "/experiment.ini"; }

}  // namespace ringtoss
