#pragma once

#include "fockstar/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fockstar {

/// One verified property. A check passes iff residual <= tolerance.
struct CheckRecord {
  std::string suite;
  std::string check_id;
  std::string anchor;     // which statement of the theory the check exercises
  double residual = 0.0;  // worst case over instances; NaN never passes
  double tolerance = 0.0;
  bool pass = false;
  int n_instances = 0;
  std::uint64_t seed = 0;
  std::string note;                  // free-form detail (fitted slope, window, ...)
  std::optional<double> wall_time;   // seconds; only when requested

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

/// Builds a record with pass = (residual <= tolerance).
CheckRecord make_record(std::string suite, std::string check_id, std::string anchor,
                        double residual, double tolerance, int n_instances, std::uint64_t seed,
                        std::string note = {});

struct VerificationReport {
  std::string config_echo;  // canonical JSON of the effective RunConfig
  std::vector<CheckRecord> records;

  bool all_pass() const;
  int n_failed() const;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Canonical JSON of a configuration (sorted keys, rationals as "p/q"), without
/// output_path.
std::string config_to_json(const RunConfig& cfg);

/// Canonical report JSON: sorted keys, two-space indent, floats as %.17g,
/// non-finite floats as null.
std::string report_to_json(const VerificationReport& report);
/// Inverse of report_to_json. Throws std::runtime_error on schema violations.
VerificationReport report_from_json(const std::string& text);

/// Fixed-width human-readable table.
std::string report_summary(const VerificationReport& report);

/// Writes `path` (JSON) and `path` with ".txt" appended (summary).
/// Throws std::runtime_error on I/O failure.
void emit_report(const VerificationReport& report, const std::string& path);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

inline constexpr const char* kReportSchemaVersion = "1";
inline constexpr const char* kFockstarVersion = "0.1.0";

}  // namespace fockstar
