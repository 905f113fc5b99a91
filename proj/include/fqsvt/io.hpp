// Copyright 2026 The fqsvt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Config ingestion and artifact emitters. JSON configs are read strictly
// (every key must be consumed); every float written to JSON or CSV uses 17
// significant digits.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqsvt/bands.hpp"
#include "fqsvt/bosehubbard.hpp"
#include "fqsvt/feedforward.hpp"
#include "fqsvt/qsp.hpp"

namespace fqsvt {

using json = nlohmann::ordered_json;

/// Malformed or out-of-schema configuration.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// "%.17g"
std::string format_double(double v);

/// Serializes with 17 significant digits for every float; keys keep
/// insertion order. indent < 0 gives a single line.
std::string dump_json(const json& j, int indent = 2);
void write_json(const std::filesystem::path& path, const json& j);

/// Parses a file; syntax errors become ConfigError.
json read_json_file(const std::filesystem::path& path);

/// View of a JSON object that records which keys were read. finish() rejects
/// any key never asked for.
class ConfigObject {
 public:
  ConfigObject(const json& j, std::string where);

  bool has(const std::string& key) const;
  const json& raw(const std::string& key);

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  long integer(const std::string& key);
  long integer(const std::string& key, long fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key);
  ConfigObject object(const std::string& key);

  const std::string& where() const { return where_; }
  void finish() const;

 private:
  const json& at(const std::string& key);
  const json* j_;
  std::string where_;
  std::set<std::string> used_;
};

json to_json(const ComplexMatrix& m);  // {"rows","cols","data":[[re,im],...]}
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

json to_json(const BandStructure& b);
json to_json(const PhaseFactorSet& p);
json to_json(const GmonModel& m);

/// Strict reader for {"modes","nmax","eta","edges":[[l,j,g],...],"delta",
/// "f","phi","check_ranges"}; omitted controls default to zero.
GmonModel gmon_from_json(const json& j, const std::string& where);

/// Leaves as {"record","prob","claimed_band","failed","queries"}.
json to_json(const BranchTree& tree);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ofstream out_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

/// "0-1-1-0" style rendering of a measurement record.
std::string record_string(std::span<const int> record);

}  // namespace fqsvt
