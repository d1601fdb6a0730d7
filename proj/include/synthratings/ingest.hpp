#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "synthratings/interaction_set.hpp"

namespace synthratings {

enum class SourceFormat { MovieLens100K, MovieLens1M, LastFM, Canonical };

/// Accepts the CLI spellings `ml100k`, `ml1m`, `lastfm`, `canonical`.
SourceFormat parse_source_format(std::string_view name);
std::string_view format_name(SourceFormat format);

/// 3 for both MovieLens formats, 0 for LastFM. Canonical files carry no value column.
double default_threshold(SourceFormat format);

/// Reads explicit feedback and keeps records whose value is strictly greater
/// than `threshold` (canonical input is taken as already positive). Ids follow
/// file order. A leading line whose first field is not numeric is treated as
/// a header, except in canonical input.
InteractionSet parse(std::istream& in, SourceFormat format, std::optional<double> threshold = std::nullopt);

InteractionSet parse_file(const std::filesystem::path& path, SourceFormat format,
                          std::optional<double> threshold = std::nullopt);

}  // namespace synthratings
