#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>

#include "ign/problems.hpp"

namespace ign {

/// Reads the sparse text format `label idx:val idx:val ...` with 1-based,
/// strictly increasing indices. Labels +1/1 map to +1; -1 and 0 map to -1.
/// Blank lines and lines starting with '#' are skipped. The dimension is
/// the largest index seen unless `dimension` is given, in which case larger
/// indices raise InconsistentDimension.
LabeledDataset read_libsvm(std::istream& in, std::optional<std::size_t> dimension = std::nullopt);
LabeledDataset load_libsvm(const std::filesystem::path& path,
                           std::optional<std::size_t> dimension = std::nullopt);

/// Writes nonzero entries with round-trip precision (%.17g).
void write_libsvm(std::ostream& out, const LabeledDataset& data);
void save_libsvm(const std::filesystem::path& path, const LabeledDataset& data);

}  // namespace ign
