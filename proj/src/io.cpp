#include "nsync/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace nsync {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

[[noreturn]] void field_error(const std::string& path, const std::string& field,
                              const std::string& what) {
  throw std::runtime_error(path + ": field \"" + field + "\" " + what);
}

double number_at(const json& value, const std::string& path, const std::string& field) {
  if (!value.is_number()) field_error(path, field, "must be a number");
  return value.get<double>();
}

Vector vector_field(const json& doc, const std::string& path, const std::string& field) {
  if (!doc.contains(field)) field_error(path, field, "is missing");
  const json& raw = doc[field];
  if (!raw.is_array()) field_error(path, field, "must be an array");
  Vector result(raw.size());
  for (size_t i = 0; i < raw.size(); ++i)
    result[static_cast<Eigen::Index>(i)] =
        number_at(raw[i], path, field + "[" + std::to_string(i + 1) + "]");
  return result;
}

void append_u64(std::uint64_t value, std::uint64_t* hash) {
  for (int byte = 0; byte < 8; ++byte) {
    *hash ^= (value >> (8 * byte)) & 0xffULL;
    *hash *= 0x100000001b3ULL;
  }
}

void append_double(double value, std::uint64_t* hash) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  append_u64(bits, hash);
}

}  // namespace

ProblemSpec load_instance(const std::string& path) {
  const json doc = parse_file(path);
  if (!doc.contains("A")) field_error(path, "A", "is missing");
  const json& rows = doc["A"];
  if (!rows.is_array() || rows.empty()) field_error(path, "A", "must be a nonempty array of rows");

  const size_t m = rows.size();
  if (!rows[0].is_array() || rows[0].empty())
    field_error(path, "A", "rows must be nonempty arrays");
  const size_t n = rows[0].size();
  Matrix A(m, n);
  for (size_t j = 0; j < m; ++j) {
    if (!rows[j].is_array() || rows[j].size() != n)
      field_error(path, "A[" + std::to_string(j + 1) + "]",
                  "must be an array of length " + std::to_string(n));
    for (size_t i = 0; i < n; ++i)
      A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          number_at(rows[j][i], path,
                    "A[" + std::to_string(j + 1) + "][" + std::to_string(i + 1) + "]");
  }

  const Vector b = vector_field(doc, path, "b");
  const Vector v = vector_field(doc, path, "v");
  if (!doc.contains("gamma")) field_error(path, "gamma", "is missing");
  const double gamma = number_at(doc["gamma"], path, "gamma");

  try {
    return ProblemSpec::least_squares(A, b, gamma, v);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_instance(const ProblemSpec& prob, const std::string& path) {
  json doc;
  doc["A"] = json::array();
  for (int j = 0; j < prob.rows(); ++j) {
    json row = json::array();
    for (int i = 0; i < prob.dim(); ++i) row.push_back(prob.matrix()(j, i));
    doc["A"].push_back(std::move(row));
  }
  doc["b"] = std::vector<double>(prob.rhs().begin(), prob.rhs().end());
  doc["gamma"] = prob.gamma();
  doc["v"] = std::vector<double>(prob.weights().begin(), prob.weights().end());
  write_file(path, doc.dump(2) + "\n");
}

SetsFile load_sets(const std::string& path) {
  const json doc = parse_file(path);
  SetsFile file;
  if (!doc.contains("n")) field_error(path, "n", "is missing");
  if (!doc["n"].is_number_integer()) field_error(path, "n", "must be an integer");
  file.n = doc["n"].get<int>();
  if (!doc.contains("tau")) field_error(path, "tau", "is missing");
  if (!doc["tau"].is_number_integer()) field_error(path, "tau", "must be an integer");
  file.tau = doc["tau"].get<int>();

  if (!doc.contains("sets")) field_error(path, "sets", "is missing");
  const json& sets = doc["sets"];
  if (!sets.is_array() || sets.empty())
    field_error(path, "sets", "must be a nonempty array of index arrays");
  for (size_t j = 0; j < sets.size(); ++j) {
    const std::string field = "sets[" + std::to_string(j + 1) + "]";
    if (!sets[j].is_array()) field_error(path, field, "must be an index array");
    IndexSet set;
    for (size_t k = 0; k < sets[j].size(); ++k) {
      const json& entry = sets[j][k];
      if (!entry.is_number_integer())
        field_error(path, field + "[" + std::to_string(k + 1) + "]", "must be an integer");
      set.push_back(entry.get<int>() - 1);  // files are 1-based
    }
    file.sets.push_back(std::move(set));
  }

  if (doc.contains("q")) file.q = vector_field(doc, path, "q");
  return file;
}

SamplingScheme load_scheme(const std::string& path) {
  SetsFile file = load_sets(path);
  if (!file.q) field_error(path, "q", "is missing");
  try {
    return SamplingScheme::build(file.n, std::move(file.sets), *file.q, file.tau);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_scheme(const SamplingScheme& scheme, const std::string& path) {
  json doc;
  doc["n"] = scheme.dim();
  doc["tau"] = scheme.tau();
  doc["sets"] = json::array();
  for (const auto& set : scheme.sets()) {
    json indices = json::array();
    for (int i : set) indices.push_back(i + 1);
    doc["sets"].push_back(std::move(indices));
  }
  doc["q"] = std::vector<double>(scheme.set_probabilities().begin(),
                                 scheme.set_probabilities().end());
  write_file(path, doc.dump(2) + "\n");
}

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

std::string instance_hash(const ProblemSpec& prob) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  append_u64(static_cast<std::uint64_t>(prob.rows()), &hash);
  append_u64(static_cast<std::uint64_t>(prob.dim()), &hash);
  for (int j = 0; j < prob.rows(); ++j)
    for (int i = 0; i < prob.dim(); ++i) append_double(prob.matrix()(j, i), &hash);
  for (int j = 0; j < prob.rows(); ++j) append_double(prob.rhs()[j], &hash);
  append_double(prob.gamma(), &hash);
  for (int i = 0; i < prob.dim(); ++i) append_double(prob.weights()[i], &hash);

  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  if (header_written_)
    throw std::logic_error("CsvWriter: metadata must precede the header");
  buffer_ += "# " + key + ": " + value + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  header_written_ = true;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_file(path, buffer_); }

}  // namespace nsync
