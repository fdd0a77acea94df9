#include "selfrep/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace selfrep {

std::string formatValue(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void writeTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed: " + path.string());
}

std::string readTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeMatrixCsv(const std::filesystem::path& path, const Matrix& a) {
  requireFinite(a, ("writeMatrixCsv: " + path.string()).c_str());
  std::string text;
  text.reserve(static_cast<std::size_t>(a.size()) * 20);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) text += ',';
      text += formatValue(a(i, j));
    }
    text += '\n';
  }
  writeTextFile(path, text);
}

Matrix readMatrixCsv(const std::filesystem::path& path, bool skipHeader) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file: " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && skipHeader) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    while (*p != '\0') {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw ValidationError("bad numeric field in " + path.string() + ": '" + line + "'");
      }
      row.push_back(v);
      p = end;
      while (*p == ' ' || *p == '\t') ++p;
      if (*p == ',') ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError("ragged rows in matrix file: " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw ValidationError("empty matrix file: " + path.string());
  }

  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  requireFinite(a, ("readMatrixCsv: " + path.string()).c_str());
  return a;
}

void writeLabelsCsv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::string text;
  for (int v : labels) {
    text += std::to_string(v);
    text += '\n';
  }
  writeTextFile(path, text);
}

std::vector<int> readLabelsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open label file: " + path.string());
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    labels.push_back(std::stoi(line));
  }
  if (labels.empty()) throw ValidationError("empty label file: " + path.string());
  return labels;
}

} // namespace selfrep
