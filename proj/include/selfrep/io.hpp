#pragma once

#include "selfrep/matrix.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace selfrep {

// Values print with 17 significant digits so a write/read round trip is
// bit exact for doubles.
std::string formatValue(double v);

// CSV, one matrix row per line, comma separated, no header.
void writeMatrixCsv(const std::filesystem::path& path, const Matrix& a);
Matrix readMatrixCsv(const std::filesystem::path& path, bool skipHeader = false);

// One integer label per line.
void writeLabelsCsv(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> readLabelsCsv(const std::filesystem::path& path);

void writeTextFile(const std::filesystem::path& path, const std::string& text);
std::string readTextFile(const std::filesystem::path& path);

} // namespace selfrep
