#include "fockstar/report.hpp"

#include <gmp.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fockstar {

using nlohmann::json;

CheckRecord make_record(std::string suite, std::string check_id, std::string anchor,
                        double residual, double tolerance, int n_instances, std::uint64_t seed,
                        std::string note) {
  CheckRecord r;
  r.suite = std::move(suite);
  r.check_id = std::move(check_id);
  r.anchor = std::move(anchor);
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = residual <= tolerance;  // false for NaN
  r.n_instances = n_instances;
  r.seed = seed;
  r.note = std::move(note);
  return r;
}

bool VerificationReport::all_pass() const { return n_failed() == 0; }

int VerificationReport::n_failed() const {
  int n = 0;
  for (const auto& r : records) n += r.pass ? 0 : 1;
  return n;
}

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  // keep the value a JSON float so it re-parses with the same type
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write_json(const json& v, std::string& out, int indent, int depth) {
  const auto pad = [&](int level) {
    if (indent > 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * level), ' ');
    }
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write_json(it.value(), out, indent, depth + 1);
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        write_json(e, out, indent, depth + 1);
      }
      pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

std::string canonical(const json& v, int indent) {
  std::string out;
  write_json(v, out, indent, 0);
  return out;
}

// output_path is left out so the report bytes do not depend on where they are written
json config_json(const RunConfig& cfg) {
  json j;
  j["d"] = cfg.d;
  j["K"] = cfg.K;
  j["N"] = cfg.N;
  j["R"] = cfg.R;
  j["weight_c"] = format_rational(cfg.weight_c);
  if (cfg.alpha.is_table()) {
    json table = json::object();
    for (const auto& [k, a] : cfg.alpha.table) table[std::to_string(k)] = format_rational(a);
    j["alpha"] = {{"table", table}, {"mu", cfg.alpha.mu}};
  } else {
    j["alpha"] = cfg.alpha.family;
  }
  j["mc"] = {{"n_samples", cfg.mc.n_samples},
             {"seed", cfg.mc.seed},
             {"K_mc", cfg.mc.K_mc},
             {"M", cfg.mc.M},
             {"n_grid", cfg.mc.n_grid}};
  j["suites"] = cfg.suites;
  j["report_wall_time"] = cfg.report_wall_time;
  return j;
}

json record_json(const CheckRecord& r) {
  json j;
  j["suite"] = r.suite;
  j["check_id"] = r.check_id;
  j["anchor"] = r.anchor;
  j["residual"] = std::isfinite(r.residual) ? json(r.residual) : json(nullptr);
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["n_instances"] = r.n_instances;
  j["seed"] = r.seed;
  j["note"] = r.note;
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

double as_double(const json& v, const char* field) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw std::runtime_error(std::string("report field ") + field + " is not a number");
  return v.get<double>();
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) { return canonical(config_json(cfg), 0); }

std::string report_to_json(const VerificationReport& report) {
  json j;
  j["config"] = report.config_echo.empty() ? json::object() : json::parse(report.config_echo);
  j["records"] = json::array();
  for (const auto& r : report.records) j["records"].push_back(record_json(r));
  j["summary"] = {{"n_checks", report.records.size()},
                  {"n_failed", report.n_failed()},
                  {"pass", report.all_pass()}};
  j["versions"] = {{"fockstar", kFockstarVersion},
                   {"gmp", gmp_version},
                   {"schema", kReportSchemaVersion}};
  return canonical(j, 2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("records") || !j.at("records").is_array()) {
    throw std::runtime_error("report has no records array");
  }
  VerificationReport out;
  if (j.contains("config") && !j.at("config").empty()) out.config_echo = canonical(j.at("config"), 0);
  try {
    for (const auto& e : j.at("records")) {
      CheckRecord r;
      r.suite = e.at("suite").get<std::string>();
      r.check_id = e.at("check_id").get<std::string>();
      r.anchor = e.at("anchor").get<std::string>();
      r.residual = as_double(e.at("residual"), "residual");
      r.tolerance = as_double(e.at("tolerance"), "tolerance");
      r.pass = e.at("pass").get<bool>();
      r.n_instances = e.at("n_instances").get<int>();
      r.seed = e.at("seed").get<std::uint64_t>();
      r.note = e.at("note").get<std::string>();
      if (e.contains("wall_time")) r.wall_time = as_double(e.at("wall_time"), "wall_time");
      out.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report record: ") + e.what());
  }
  return out;
}

std::string report_summary(const VerificationReport& report) {
  std::string out;
  char line[512];
  for (const auto& r : report.records) {
    std::snprintf(line, sizeof line, "%-4s  %-12s %-36s residual=%-12.4g tol=%-10.3g n=%-5d %s\n",
                  r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.check_id.c_str(), r.residual,
                  r.tolerance, r.n_instances, r.note.c_str());
    out += line;
  }
  std::snprintf(line, sizeof line, "%zu checks, %d failed\n", report.records.size(),
                report.n_failed());
  out += line;
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void emit_report(const VerificationReport& report, const std::string& path) {
  write_text_file(path, report_to_json(report));
  write_text_file(path + ".txt", report_summary(report));
}

}  // namespace fockstar
