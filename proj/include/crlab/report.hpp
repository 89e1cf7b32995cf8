#pragma once

// Check rows and reports. JSON output is deterministic (no timings); the CSV
// form carries wall times.

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

namespace crlab {

struct Check {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;  // measured and reported, never gates the exit code
  std::string note;
  double wall_time = 0.0;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  /// pass = residual <= tolerance (NaN fails).
  Check& add(std::string name, std::string anchor, double residual, double tolerance);
  /// pass = condition; residual is reported as a measurement.
  Check& add_condition(std::string name, std::string anchor, bool condition, double measured);
  Check& add_info(std::string name, std::string anchor, double measured, std::string note = {});

  /// Wall time since the last call is attributed to every row added since then.
  void stamp();

  nlohmann::json& data() { return data_; }
  const nlohmann::json& data() const { return data_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::string& command() const { return command_; }

  bool all_pass() const;
  std::size_t failures() const;

  /// Throws Error if a row has an empty anchor.
  void validate() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
  std::string to_table() const;

  void merge(const Report& other);

 private:
  std::string command_;
  std::vector<Check> checks_;
  nlohmann::json data_ = nlohmann::json::object();
  std::size_t stamped_ = 0;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace crlab
