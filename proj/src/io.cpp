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

#include "fqsvt/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fqsvt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_rec(std::ostringstream& os, const json& j, int indent, int level) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        first = false;
        newline(level + 1);
        os << json(k).dump() << (indent < 0 ? ":" : ": ");
        dump_rec(os, v, indent, level + 1);
      }
      newline(level);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) newline(level + 1);
        dump_rec(os, v, indent, level + 1);
      }
      if (!flat) newline(level);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      // JSON has no inf/nan.
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

std::string type_name(const json& j) { return j.type_name(); }

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  dump_rec(os, j, indent, 0);
  return os.str();
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json(j) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------

ConfigObject::ConfigObject(const json& j, std::string where) : j_(&j), where_(std::move(where)) {
  if (!j.is_object()) throw ConfigError("config: " + where_ + " must be an object");
}

bool ConfigObject::has(const std::string& key) const { return j_->contains(key); }

const json& ConfigObject::at(const std::string& key) {
  if (!j_->contains(key)) throw ConfigError("config: missing key '" + key + "' in " + where_);
  used_.insert(key);
  return (*j_)[key];
}

const json& ConfigObject::raw(const std::string& key) { return at(key); }

double ConfigObject::number(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number()) {
    throw ConfigError("config: " + where_ + "." + key + " must be a number, got " + type_name(v));
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config: " + where_ + "." + key + " is not finite");
  return x;
}

double ConfigObject::number(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long ConfigObject::integer(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("config: " + where_ + "." + key + " must be an integer");
  }
  return v.get<long>();
}

long ConfigObject::integer(const std::string& key, long fallback) {
  return has(key) ? integer(key) : fallback;
}

bool ConfigObject::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError("config: " + where_ + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string ConfigObject::string(const std::string& key) {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError("config: " + where_ + "." + key + " must be a string");
  return v.get<std::string>();
}

std::string ConfigObject::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

std::vector<double> ConfigObject::numbers(const std::string& key) {
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError("config: " + where_ + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      throw ConfigError("config: " + where_ + "." + key + " must contain only numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

ConfigObject ConfigObject::object(const std::string& key) {
  return ConfigObject(at(key), where_ + "." + key);
}

void ConfigObject::finish() const {
  for (const auto& [k, v] : j_->items()) {
    if (!used_.count(k)) throw ConfigError("config: unknown key '" + k + "' in " + where_);
  }
}

// ---------------------------------------------------------------------------

json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back(json::array({z.real(), z.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  ConfigObject o(j, where);
  const long rows = o.integer("rows");
  const long cols = o.integer("cols");
  if (rows < 1 || cols < 1) throw ConfigError("config: " + where + " needs positive dimensions");
  const json& data = o.raw("data");
  o.finish();
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw ConfigError("config: " + where + ".data must hold rows*cols entries");
  }
  ComplexMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::size_t k = 0;
  for (const auto& e : data) {
    if (e.is_number()) {
      m.data()[k++] = cplx(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      m.data()[k++] = cplx(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ConfigError("config: " + where + ".data entries must be numbers or [re, im]");
    }
  }
  if (!m.all_finite()) throw ConfigError("config: " + where + " has non-finite entries");
  return m;
}

json to_json(const BandStructure& b) {
  return json{{"L", b.count}, {"centers", b.centers}, {"delta", b.delta}, {"bands", b.bands}};
}

json to_json(const PhaseFactorSet& p) {
  return json{{"convention", to_string(p.convention())},
              {"degree", p.degree()},
              {"symmetric", p.is_symmetric()},
              {"phases", p.values()}};
}

json to_json(const GmonModel& m) {
  json edges = json::array();
  for (const auto& e : m.edges) edges.push_back(json::array({e.l, e.j, e.g}));
  return json{{"modes", m.modes}, {"nmax", m.nmax}, {"eta", m.eta},     {"edges", edges},
              {"delta", m.delta}, {"f", m.f},       {"phi", m.phi},     {"check_ranges", m.check_ranges}};
}

GmonModel gmon_from_json(const json& j, const std::string& where) {
  ConfigObject o(j, where);
  GmonModel m;
  const long modes = o.integer("modes", 2);
  if (modes < 1 || modes > 12) throw ConfigError("config: " + where + ".modes must lie in [1, 12]");
  m.modes = static_cast<std::size_t>(modes);
  m.nmax = static_cast<int>(o.integer("nmax", 3));
  m.eta = o.number("eta", m.eta);
  m.check_ranges = o.boolean("check_ranges", true);
  auto per_mode = [&](const std::string& key) {
    if (!o.has(key)) return std::vector<double>(m.modes, 0.0);
    auto v = o.numbers(key);
    if (v.size() != m.modes) {
      throw ConfigError("config: " + where + "." + key + " needs one entry per mode");
    }
    return v;
  };
  m.delta = per_mode("delta");
  m.f = per_mode("f");
  m.phi = per_mode("phi");
  if (o.has("edges")) {
    const json& edges = o.raw("edges");
    if (!edges.is_array()) throw ConfigError("config: " + where + ".edges must be an array");
    for (const auto& e : edges) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
          !e[1].is_number_unsigned() || !e[2].is_number()) {
        throw ConfigError("config: " + where + ".edges entries must be [l, j, g]");
      }
      m.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
  }
  o.finish();
  try {
    m.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + where + ": " + e.what());
  }
  return m;
}

json to_json(const BranchTree& tree) {
  json leaves = json::array();
  for (const BranchNode* n : tree.leaves()) {
    leaves.push_back(json{{"record", n->record},
                          {"prob", n->probability},
                          {"claimed_band", claimed_band(n->record)},
                          {"failed", failed(n->record)},
                          {"queries", n->queries}});
  }
  return json{{"leaves", std::move(leaves)},
              {"conservation_residual", tree.conservation_residual()}};
}

// ---------------------------------------------------------------------------

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::sep() {
  if (pending_ == columns_) throw std::logic_error("CsvWriter: too many cells in row");
  if (pending_++) out_ << ',';
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_) throw std::logic_error("CsvWriter: short row");
  out_ << '\n';
  pending_ = 0;
}

std::string record_string(std::span<const int> record) {
  std::string s;
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(record[i]);
  }
  return s;
}

}  // namespace fqsvt
