#pragma once

#include <filesystem>
#include <string>

#include "rlab/params.hpp"
#include "rlab/sources.hpp"

namespace rlab::io {

/// Measure documents:
///   {"atoms": [{"A": w, "a": [x1, ..., xn]}, ...]}
///   {"grid": {"origin": [...], "h": h, "shape": [...], "values": [...]}}
/// Grid values are listed with the last axis varying fastest.
SourceMeasure parse_measure(const std::string& text);
SourceMeasure load_measure(const std::filesystem::path& path);
std::string dump_measure(const SourceMeasure& source);

/// {"n": 3, "p": 2 | "inf", "q": 1, "alpha": 0.5}
Params parse_params(const std::string& text);
Params load_params(const std::filesystem::path& path);
std::string dump_params(const Params& params);

}  // namespace rlab::io
