#include "crlab/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "crlab/errors.hpp"

namespace crlab {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

Check& Report::add(std::string name, std::string anchor, double residual, double tolerance) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = residual <= tolerance;
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& Report::add_condition(std::string name, std::string anchor, bool condition, double measured) {
  Check& c = add(std::move(name), std::move(anchor), measured, 0.0);
  c.pass = condition;
  c.tolerance = std::nan("");
  return c;
}

Check& Report::add_info(std::string name, std::string anchor, double measured, std::string note) {
  Check& c = add(std::move(name), std::move(anchor), measured, 0.0);
  c.pass = true;
  c.informational = true;
  c.tolerance = std::nan("");
  c.note = std::move(note);
  return c;
}

void Report::stamp() {
  const auto now = std::chrono::steady_clock::now();
  const double dt = std::chrono::duration<double>(now - last_).count();
  const std::size_t n = checks_.size() - stamped_;
  for (std::size_t i = stamped_; i < checks_.size(); ++i) checks_[i].wall_time = n > 0 ? dt / n : 0.0;
  stamped_ = checks_.size();
  last_ = now;
}

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks_)
    if (!c.informational && !c.pass) ++n;
  return n;
}

void Report::validate() const {
  for (const auto& c : checks_)
    if (c.anchor.empty()) throw Error("report row '" + c.name + "' has no anchor");
}

nlohmann::json Report::to_json() const {
  validate();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json r = {{"name", c.name},
                        {"anchor", c.anchor},
                        {"residual", number(c.residual)},
                        {"tolerance", number(c.tolerance)},
                        {"pass", c.pass},
                        {"informational", c.informational}};
    if (!c.note.empty()) r["note"] = c.note;
    rows.push_back(std::move(r));
  }
  return {{"command", command_}, {"pass", all_pass()}, {"checks", rows}, {"data", data_}};
}

std::string Report::to_csv() const {
  validate();
  std::ostringstream out;
  out << std::setprecision(17);
  out << "command,name,anchor,residual,tolerance,pass,informational,wall_time\n";
  for (const auto& c : checks_) {
    out << csv_escape(command_) << ',' << csv_escape(c.name) << ',' << csv_escape(c.anchor) << ',' << c.residual
        << ',' << c.tolerance << ',' << (c.pass ? "true" : "false") << ',' << (c.informational ? "true" : "false")
        << ',' << c.wall_time << '\n';
  }
  return out.str();
}

std::string Report::to_table() const {
  std::ostringstream out;
  out << std::setprecision(3);
  for (const auto& c : checks_) {
    const char* tag = c.informational ? "INFO" : (c.pass ? "PASS" : "FAIL");
    out << tag << "  [" << c.anchor << "] " << c.name << ": " << c.residual;
    if (!std::isnan(c.tolerance)) out << " (tol " << c.tolerance << ")";
    if (!c.note.empty()) out << "  " << c.note;
    out << '\n';
  }
  out << command_ << ": " << (all_pass() ? "all checks pass" : std::to_string(failures()) + " check(s) failed") << '\n';
  return out.str();
}

void Report::merge(const Report& other) {
  for (const auto& c : other.checks_) checks_.push_back(c);
  stamped_ = checks_.size();
  data_[other.command_] = other.data_;
}

}  // namespace crlab
