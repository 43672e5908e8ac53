#include "ign/libsvm.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ign/error.hpp"

namespace ign {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  fail(ErrorCode::ParseError, os.str());
}

double parse_double(std::string_view token, std::size_t line) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_error(line, "bad number '" + std::string(token) + "'");
  return v;
}

struct SparseRow {
  double label;
  std::vector<std::pair<std::size_t, double>> entries;
};

}  // namespace

LabeledDataset read_libsvm(std::istream& in, std::optional<std::size_t> dimension) {
  std::vector<SparseRow> rows;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;

    SparseRow row;
    if (token.front() == '+') token.erase(0, 1);
    const double raw = parse_double(token, line_no);
    if (raw == 1.0) {
      row.label = 1.0;
    } else if (raw == -1.0 || raw == 0.0) {
      row.label = -1.0;
    } else {
      parse_error(line_no, "label must be -1, 0 or +1, got '" + token + "'");
    }

    std::size_t previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0) parse_error(line_no, "expected idx:val, got '" + token + "'");
      std::size_t index = 0;
      const auto* first = token.data();
      auto [ptr, ec] = std::from_chars(first, first + colon, index);
      if (ec != std::errc() || ptr != first + colon) parse_error(line_no, "bad index in '" + token + "'");
      if (index == 0) parse_error(line_no, "indices are 1-based");
      if (index <= previous) parse_error(line_no, "indices must be strictly increasing");
      if (dimension && index > *dimension) {
        std::ostringstream os;
        os << "line " << line_no << ": index " << index << " exceeds dimension " << *dimension;
        fail(ErrorCode::InconsistentDimension, os.str());
      }
      previous = index;
      const double value = parse_double(std::string_view(token).substr(colon + 1), line_no);
      row.entries.emplace_back(index, value);
      max_index = std::max(max_index, index);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::EmptyDataset, "no samples in libsvm input");

  const std::size_t d = dimension ? *dimension : max_index;
  if (d == 0) fail(ErrorCode::InconsistentDimension, "cannot infer a positive dimension");
  LabeledDataset out;
  out.features = Matrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(d));
  out.labels.resize(static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto r = static_cast<Index>(j);
    out.labels(r) = rows[j].label;
    for (const auto& [index, value] : rows[j].entries) {
      out.features(r, static_cast<Index>(index - 1)) = value;
    }
  }
  return out;
}

LabeledDataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> dimension) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return read_libsvm(in, dimension);
}

void write_libsvm(std::ostream& out, const LabeledDataset& data) {
  char buf[64];
  for (Index j = 0; j < data.features.rows(); ++j) {
    out << (data.labels(j) > 0.0 ? "+1" : "-1");
    for (Index k = 0; k < data.features.cols(); ++k) {
      const double v = data.features(j, k);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ' ' << (k + 1) << ':' << buf;
    }
    out << '\n';
  }
}

void save_libsvm(const std::filesystem::path& path, const LabeledDataset& data) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  write_libsvm(out, data);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace ign
