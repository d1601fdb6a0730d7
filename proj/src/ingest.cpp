#include "synthratings/ingest.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>

#include "synthratings/error.hpp"

namespace synthratings {
namespace {

struct Layout {
  std::string_view delimiter;
  std::size_t min_fields;
  bool has_value;
};

Layout layout_of(SourceFormat format) {
  switch (format) {
    case SourceFormat::MovieLens100K: return {"\t", 3, true};
    case SourceFormat::MovieLens1M: return {"::", 3, true};
    case SourceFormat::LastFM: return {"\t", 3, true};
    case SourceFormat::Canonical: return {"\t", 2, false};
  }
  throw ArgumentError("unknown source format");
}

// Splits on `delim`; returns the number of fields written (at most 3 kept).
std::size_t split(std::string_view line, std::string_view delim, std::array<std::string_view, 3>& fields) {
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    const auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (n < fields.size()) fields[n] = field;
    ++n;
    if (pos == std::string_view::npos) break;
    start = pos + delim.size();
  }
  return n;
}

bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

SourceFormat parse_source_format(std::string_view name) {
  if (name == "ml100k") return SourceFormat::MovieLens100K;
  if (name == "ml1m") return SourceFormat::MovieLens1M;
  if (name == "lastfm") return SourceFormat::LastFM;
  if (name == "canonical") return SourceFormat::Canonical;
  throw ArgumentError("unknown format '" + std::string(name) + "' (expected ml100k, ml1m, lastfm or canonical)");
}

std::string_view format_name(SourceFormat format) {
  switch (format) {
    case SourceFormat::MovieLens100K: return "ml100k";
    case SourceFormat::MovieLens1M: return "ml1m";
    case SourceFormat::LastFM: return "lastfm";
    case SourceFormat::Canonical: return "canonical";
  }
  throw ArgumentError("unknown source format");
}

double default_threshold(SourceFormat format) {
  switch (format) {
    case SourceFormat::MovieLens100K:
    case SourceFormat::MovieLens1M: return 3.0;
    case SourceFormat::LastFM:
    case SourceFormat::Canonical: return 0.0;
  }
  throw ArgumentError("unknown source format");
}

InteractionSet parse(std::istream& in, SourceFormat format, std::optional<double> threshold) {
  const Layout layout = layout_of(format);
  const double cut = threshold.value_or(default_threshold(format));
  InteractionSet::Builder builder;
  std::array<std::string_view, 3> fields;
  std::string line;
  std::size_t line_no = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    const std::size_t n = split(view, layout.delimiter, fields);
    if (n < layout.min_fields || (!layout.has_value && n != 2)) {
      throw ParseError("expected " + std::to_string(layout.min_fields) + " fields for " +
                           std::string(format_name(format)) + ", found " + std::to_string(n),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty identifier", line_no);
    if (layout.has_value) {
      double value = 0.0;
      if (!parse_number(fields[2], value)) {
        double probe = 0.0;
        if (!seen_record && !parse_number(fields[0], probe)) {
          seen_record = true;  // header line
          continue;
        }
        throw ParseError("non-numeric value '" + std::string(fields[2]) + "'", line_no);
      }
      seen_record = true;
      if (!(value > cut)) continue;
    }
    builder.add(fields[0], fields[1]);
  }
  if (in.bad()) throw ParseError("read failure", line_no);
  return std::move(builder).finish();
}

InteractionSet parse_file(const std::filesystem::path& path, SourceFormat format, std::optional<double> threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
  return parse(in, format, threshold);
}

}  // namespace synthratings
