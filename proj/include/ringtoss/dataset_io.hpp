#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringtoss/nn/checkpoint.hpp"
#include "ringtoss/nn/dense.hpp"
#include "ringtoss/simulator.hpp"
#include "ringtoss/vmp.hpp"

namespace ringtoss {

/// One dataset line: fitted parameters plus provenance.
struct ParamRecord {
  TrajectoryParams params;
  Target target;
  std::uint64_t seed = 0;
};

/// One execution-log line. `landed` is false when the flight never reached
/// the target plane; the landing fields are then meaningless.
struct ExecutionRecord {
  long index = 0;
  Target target;
  bool landed = false;
  double x_exe = 0.0;
  double y_exe = 0.0;
  bool success = false;
  ThrowState release;
  std::optional<TrajectoryParams> params;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nn::Json to_json(const TrajectoryParams& p);
TrajectoryParams params_from_json(const nn::Json& j);
nn::Json to_json(const ParamRecord& r);
ParamRecord param_record_from_json(const nn::Json& j);
nn::Json to_json(const ExecutionRecord& r);
ExecutionRecord execution_record_from_json(const nn::Json& j);
ExecutionRecord to_execution_record(long index, const Target& target, const Outcome<LandingRecord, NoLanding>& outcome,
                                    const ThrowState& fallback_release);

void write_params_jsonl(const std::string& path, const std::vector<ParamRecord>& records);
std::vector<ParamRecord> read_params_jsonl(const std::string& path);

void write_execution_log(const std::string& path, const std::vector<ExecutionRecord>& records, bool append = false);
std::vector<ExecutionRecord> read_execution_log(const std::string& path);

/// x_exe, y_exe, x_T, y_T, success
void write_landing_csv(const std::string& path, const std::vector<ExecutionRecord>& records);

/// Flattened parameter vectors as matrix rows.
nn::Matrix params_matrix(const std::vector<ParamRecord>& records);
nn::Matrix params_matrix(const std::vector<TrajectoryParams>& params);

/// FNV-1a of a file's bytes.
std::string file_hash(const std::string& path);

}  // namespace ringtoss
