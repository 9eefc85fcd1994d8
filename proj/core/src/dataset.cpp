#include "plcprep/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "plcprep/error.hpp"

namespace plcprep {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::no_periodicity: return "no_periodicity";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {

void check_columns(std::size_t rows, const std::vector<FeatureColumn>& columns) {
  std::unordered_set<std::string> seen;
  for (const auto& column : columns) {
    if (column.values.size() != rows) {
      throw Error(ErrorKind::invalid_argument,
                  "column '" + column.name + "' has " + std::to_string(column.values.size()) +
                      " values, expected " + std::to_string(rows));
    }
    if (!seen.insert(column.name).second) {
      throw Error(ErrorKind::invalid_argument, "duplicate column name '" + column.name + "'");
    }
    for (double v : column.values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::invalid_argument,
                    "column '" + column.name + "' contains a non-finite value");
      }
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(begin)));
      return fields;
    }
    fields.push_back(trim(line.substr(begin, comma - begin)));
    begin = comma + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

// Buffered writer; flushes in large chunks so multi-million-row exports stay fast.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) {
      throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    }
    buffer_.reserve(kChunk + 4096);
  }

  void text(std::string_view s) { buffer_.append(s); }
  void ch(char c) { buffer_.push_back(c); }

  void integer(TimestampMs v) {
    char tmp[24];
    auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
    buffer_.append(tmp, res.ptr);
  }

  void number(double v) {
    char tmp[32];
    auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
    buffer_.append(tmp, res.ptr);
  }

  void end_row() {
    buffer_.push_back('\n');
    if (buffer_.size() >= kChunk) flush();
  }

  void close() {
    flush();
    out_.close();
    if (!out_) {
      throw Error(ErrorKind::io, "failed writing '" + path_.string() + "'");
    }
  }

 private:
  static constexpr std::size_t kChunk = 1 << 20;

  void flush() {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out_) {
      throw Error(ErrorKind::io, "failed writing '" + path_.string() + "'");
    }
    buffer_.clear();
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::string buffer_;
};

void write_table(const std::filesystem::path& path, const std::vector<FeatureColumn>& columns,
                 std::size_t rows, auto timestamp_of) {
  CsvWriter out(path);
  out.text("timestamp_ms");
  for (const auto& column : columns) {
    out.ch(',');
    out.text(column.name);
  }
  out.end_row();
  for (std::size_t r = 0; r < rows; ++r) {
    out.integer(timestamp_of(r));
    for (const auto& column : columns) {
      out.ch(',');
      out.number(column.values[r]);
    }
    out.end_row();
  }
  out.close();
}

}  // namespace

EventSeries::EventSeries(std::vector<TimestampMs> timestamps_ms, std::vector<FeatureColumn> columns,
                         std::string name)
    : timestamps_(std::move(timestamps_ms)), columns_(std::move(columns)), name_(std::move(name)) {
  if (timestamps_.empty()) {
    throw Error(ErrorKind::invalid_argument, "empty dataset");
  }
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] <= timestamps_[i - 1]) {
      throw Error(ErrorKind::invalid_argument,
                  "non-increasing timestamp at row " + std::to_string(i + 1));
    }
  }
  check_columns(timestamps_.size(), columns_);
}

EventSeries EventSeries::with_columns(std::vector<FeatureColumn> columns) const {
  return EventSeries(timestamps_, std::move(columns), name_);
}

UniformSeries::UniformSeries(TimestampMs start_ms, TimestampMs step_ms, std::size_t rows,
                             std::vector<FeatureColumn> columns)
    : start_ms_(start_ms), step_ms_(step_ms), rows_(rows), columns_(std::move(columns)) {
  if (step_ms_ <= 0) {
    throw Error(ErrorKind::invalid_argument, "step_ms must be positive");
  }
  if (rows_ == 0) {
    throw Error(ErrorKind::invalid_argument, "uniform series needs at least one row");
  }
  check_columns(rows_, columns_);
}

double UniformSeries::sampling_frequency_hz() const {
  return 1000.0 / static_cast<double>(step_ms_);
}

UniformSeries UniformSeries::with_columns(std::vector<FeatureColumn> columns) const {
  return UniformSeries(start_ms_, step_ms_, rows_, std::move(columns));
}

std::size_t UniformSeries::find_column(const std::string& name) const noexcept {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return npos;
}

EventSeries parse_event_csv(const std::filesystem::path& path) {
  return parse_event_csv_text(read_file(path), path.filename().string());
}

EventSeries parse_event_csv_text(std::string_view text, std::string name) {
  std::vector<std::string_view> lines;
  {
    std::size_t begin = 0;
    while (begin <= text.size()) {
      auto nl = text.find('\n', begin);
      if (nl == std::string_view::npos) nl = text.size();
      lines.push_back(text.substr(begin, nl - begin));
      begin = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  }
  if (lines.empty()) {
    throw ParseError("missing header row", 0);
  }

  // Tolerate a UTF-8 byte order mark in front of the header.
  std::string_view header_line = lines.front();
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  const auto header = split_fields(header_line);
  if (header.front() != "timestamp_ms") {
    throw ParseError("first column must be named 'timestamp_ms'", 0, 0);
  }
  if (header.size() < 2) {
    throw ParseError("no feature columns", 0);
  }

  std::vector<FeatureColumn> columns(header.size() - 1);
  {
    std::unordered_set<std::string_view> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c].empty()) {
        throw ParseError("empty column name at column " + std::to_string(c + 1), 0, c);
      }
      if (!seen.insert(header[c]).second) {
        throw ParseError("duplicate column name '" + std::string(header[c]) + "' at column " +
                             std::to_string(c + 1),
                         0, c);
      }
      columns[c - 1].name = std::string(header[c]);
      columns[c - 1].values.reserve(lines.size() - 1);
    }
  }

  if (lines.size() == 1) {
    throw ParseError("empty dataset", 0);
  }

  std::vector<TimestampMs> timestamps;
  timestamps.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li;  // 1-based data row
    const auto fields = split_fields(lines[li]);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(header.size()),
                       row);
    }

    const auto ts_text = fields.front();
    if (ts_text.empty()) {
      throw ParseError("empty cell at row " + std::to_string(row) + ", column 'timestamp_ms'", row, 0);
    }
    TimestampMs ts = 0;
    auto ts_res = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
    if (ts_res.ec != std::errc{} || ts_res.ptr != ts_text.data() + ts_text.size()) {
      throw ParseError("non-integer timestamp '" + std::string(ts_text) + "' at row " +
                           std::to_string(row),
                       row, 0);
    }
    if (!timestamps.empty() && ts <= timestamps.back()) {
      throw ParseError("non-increasing timestamp at row " + std::to_string(row), row, 0);
    }
    timestamps.push_back(ts);

    for (std::size_t c = 1; c < fields.size(); ++c) {
      const auto cell = fields[c];
      const auto& col_name = columns[c - 1].name;
      if (cell.empty()) {
        throw ParseError("empty cell at row " + std::to_string(row) + ", column '" + col_name + "'",
                         row, c);
      }
      double value = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw ParseError("non-numeric value '" + std::string(cell) + "' at row " +
                             std::to_string(row) + ", column '" + col_name + "'",
                         row, c);
      }
      if (!std::isfinite(value)) {
        throw ParseError("non-finite value '" + std::string(cell) + "' at row " +
                             std::to_string(row) + ", column '" + col_name + "'",
                         row, c);
      }
      columns[c - 1].values.push_back(value);
    }
  }

  return EventSeries(std::move(timestamps), std::move(columns), std::move(name));
}

UniformSeries as_uniform(const EventSeries& series) {
  const auto& ts = series.timestamps_ms();
  if (ts.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "cannot infer a step from a single row");
  }
  const TimestampMs step = ts[1] - ts[0];
  for (std::size_t i = 2; i < ts.size(); ++i) {
    if (ts[i] - ts[i - 1] != step) {
      throw Error(ErrorKind::invalid_argument,
                  "series is not equidistant (row " + std::to_string(i + 1) +
                      "); resample it first");
    }
  }
  return UniformSeries(ts.front(), step, ts.size(), series.columns());
}

void write_uniform_csv(const UniformSeries& series, const std::filesystem::path& path) {
  if (series.columns().empty()) {
    throw Error(ErrorKind::invalid_argument, "series has no feature columns");
  }
  write_table(path, series.columns(), series.rows(),
              [&](std::size_t r) { return series.timestamp_at(r); });
}

void write_event_csv(const EventSeries& series, const std::filesystem::path& path) {
  if (series.columns().empty()) {
    throw Error(ErrorKind::invalid_argument, "series has no feature columns");
  }
  const auto& ts = series.timestamps_ms();
  write_table(path, series.columns(), series.rows(), [&](std::size_t r) { return ts[r]; });
}

std::string format_number(double value) {
  char tmp[32];
  auto res = std::to_chars(tmp, tmp + sizeof tmp, value);
  return std::string(tmp, res.ptr);
}

}  // namespace plcprep
