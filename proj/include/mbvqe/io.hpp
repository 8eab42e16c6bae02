#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mbvqe/pattern.hpp"
#include "mbvqe/vqe.hpp"

namespace mbvqe {

/// Reject any key outside the allowed set (typo guard for config files).
void require_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                  const std::string& where);

nlohmann::json pattern_to_json(const MeasurementPattern& p);
MeasurementPattern pattern_from_json(const nlohmann::json& j);

nlohmann::json pauli_sum_to_json(const PauliSum& h);

/// CSV writer that embeds the resolved config (and anything else worth
/// reproducing from) as '#'-prefixed header lines before the column header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_meta(const std::string& key, const nlohmann::json& value);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

/// Format a double with enough digits to round-trip.
std::string fmt_double(double v);

/// Write atomically: contents land at path only on success; on failure the
/// partial data stays at "<path>.partial".
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace mbvqe
