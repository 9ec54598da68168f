#include "ringtoss/dataset_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ringtoss {

namespace {

nn::Json vec_json(const Eigen::Ref<const Eigen::VectorXd>& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec6 vec6(const nn::Json& j, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != kNumJoints) throw FormatError(std::string(what) + ": expected 6 values");
  return Eigen::Map<const Vec6>(v.data());
}

Vec3 vec3(const nn::Json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw FormatError("expected 3 values");
  return {v[0], v[1], v[2]};
}

template <typename F>
void for_each_line(const std::string& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      f(nn::Json::parse(line));
    } catch (const nn::Json::exception& e) {
      throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void write_lines(const std::string& path, const std::vector<nn::Json>& lines, bool append) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw FormatError("write failed for " + path);
}

}  // namespace

nn::Json to_json(const TrajectoryParams& p) {
  nn::Json w = nn::Json::array();
  for (Eigen::Index j = 0; j < p.weights.rows(); ++j) w.push_back(vec_json(p.weights.row(j).transpose()));
  return {{"weights", w}, {"q_end", vec_json(p.q_end)}, {"qdot_end", vec_json(p.qdot_end)}, {"length_steps", p.length}};
}

TrajectoryParams params_from_json(const nn::Json& j) {
  TrajectoryParams p;
  const auto& w = j.at("weights");
  if (!w.is_array() || w.size() != kNumJoints) throw FormatError("weights: expected 6 rows");
  const std::size_t K = w[0].size();
  p.weights.resize(kNumJoints, static_cast<Eigen::Index>(K));
  for (int r = 0; r < kNumJoints; ++r) {
    const auto row = w[static_cast<std::size_t>(r)].get<std::vector<double>>();
    if (row.size() != K) throw FormatError("weights: ragged rows");
    for (std::size_t i = 0; i < K; ++i) p.weights(r, static_cast<Eigen::Index>(i)) = row[i];
  }
  p.q_end = vec6(j.at("q_end"), "q_end");
  p.qdot_end = vec6(j.at("qdot_end"), "qdot_end");
  p.length = j.at("length_steps").get<long>();
  return p;
}

nn::Json to_json(const ParamRecord& r) {
  nn::Json j = to_json(r.params);
  j["meta"] = {{"target_x", r.target.x}, {"target_y", r.target.y}, {"seed", r.seed}};
  return j;
}

ParamRecord param_record_from_json(const nn::Json& j) {
  ParamRecord r;
  r.params = params_from_json(j);
  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    r.target = {m.value("target_x", 0.0), m.value("target_y", 0.0)};
    r.seed = m.value("seed", std::uint64_t{0});
  }
  return r;
}

nn::Json to_json(const ExecutionRecord& r) {
  nn::Json j{{"index", r.index},
             {"target_x", r.target.x},
             {"target_y", r.target.y},
             {"landed", r.landed},
             {"x_exe", r.x_exe},
             {"y_exe", r.y_exe},
             {"success", r.success},
             {"release",
              {{"position", vec_json(r.release.pose.translation)},
               {"lin_vel", vec_json(r.release.lin_vel)},
               {"ang_vel", vec_json(r.release.ang_vel)}}}};
  if (r.params) j["params"] = to_json(*r.params);
  return j;
}

ExecutionRecord execution_record_from_json(const nn::Json& j) {
  ExecutionRecord r;
  r.index = j.at("index").get<long>();
  r.target = {j.at("target_x").get<double>(), j.at("target_y").get<double>()};
  r.landed = j.at("landed").get<bool>();
  r.x_exe = j.at("x_exe").get<double>();
  r.y_exe = j.at("y_exe").get<double>();
  r.success = j.at("success").get<bool>();
  const auto& rel = j.at("release");
  r.release.pose.translation = vec3(rel.at("position"));
  r.release.lin_vel = vec3(rel.at("lin_vel"));
  r.release.ang_vel = vec3(rel.at("ang_vel"));
  if (j.contains("params")) r.params = params_from_json(j.at("params"));
  return r;
}

ExecutionRecord to_execution_record(long index, const Target& target, const Outcome<LandingRecord, NoLanding>& outcome,
                                    const ThrowState& fallback_release) {
  ExecutionRecord r;
  r.index = index;
  r.target = target;
  r.release = fallback_release;
  if (outcome) {
    r.landed = true;
    r.x_exe = outcome->x_exe;
    r.y_exe = outcome->y_exe;
    r.success = outcome->success;
    r.release = outcome->release_state;
  }
  return r;
}

void write_params_jsonl(const std::string& path, const std::vector<ParamRecord>& records) {
  std::vector<nn::Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(to_json(r));
  write_lines(path, lines, false);
}

std::vector<ParamRecord> read_params_jsonl(const std::string& path) {
  std::vector<ParamRecord> out;
  for_each_line(path, [&](const nn::Json& j) { out.push_back(param_record_from_json(j)); });
  return out;
}

void write_execution_log(const std::string& path, const std::vector<ExecutionRecord>& records, bool append) {
  std::vector<nn::Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(to_json(r));
  write_lines(path, lines, append);
}

std::vector<ExecutionRecord> read_execution_log(const std::string& path) {
  std::vector<ExecutionRecord> out;
  for_each_line(path, [&](const nn::Json& j) { out.push_back(execution_record_from_json(j)); });
  return out;
}

void write_landing_csv(const std::string& path, const std::vector<ExecutionRecord>& records) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out.precision(17);
  out << "x_exe,y_exe,x_T,y_T,success\n";
  for (const auto& r : records) {
    if (!r.landed) continue;
    out << r.x_exe << ',' << r.y_exe << ',' << r.target.x << ',' << r.target.y << ',' << (r.success ? 1 : 0) << '\n';
  }
}

nn::Matrix params_matrix(const std::vector<TrajectoryParams>& params) {
  if (params.empty()) return nn::Matrix(0, kParamDim);
  const Eigen::Index d = flatten(params.front()).size();
  nn::Matrix m(static_cast<Eigen::Index>(params.size()), d);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Eigen::VectorXd v = flatten(params[i]);
    if (v.size() != d) throw ShapeMismatch("params_matrix: mixed basis counts");
    m.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  return m;
}

nn::Matrix params_matrix(const std::vector<ParamRecord>& records) {
  std::vector<TrajectoryParams> p;
  p.reserve(records.size());
  for (const auto& r : records) p.push_back(r.params);
  return params_matrix(p);
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  const std::string s = os.str();
  return nn::fnv1a_hex(s.data(), s.size());
}

}  // namespace ringtoss
