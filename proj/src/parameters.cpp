#include "seernf/parameters.hpp"

#include <fmt/format.h>

#include "seernf/errors.hpp"

namespace seernf {

namespace {

constexpr std::array<std::string_view, kParamCount> kSymbols = {
    "ACAP", "AEXP", "PCAP", "LEXP", "DEXP", "TEXP", "PEXP", "MODP", "TOOL",
    "TURN", "TERM", "MULT", "RDED", "RLOC", "DSVL", "PSVL", "RVOL", "SPEC",
    "TEST", "QUAL", "RHST", "REUS", "LANG", "DSY",  "APPL", "PSYS", "DISP",
    "MEMC", "TIMC", "RTIM", "TSYS", "TSVL", "SECR", "D",    "SIBR"};

}  // namespace

Param param_at(int index) {
  if (index < 1 || index > kParamCount) {
    throw RangeError(fmt::format("parameter index {} outside [1, {}]", index, kParamCount));
  }
  return static_cast<Param>(index);
}

std::string_view symbol(Param p) { return kSymbols[static_cast<std::size_t>(slot_of(p))]; }

std::optional<Param> find_param(std::string_view sym) {
  for (std::size_t i = 0; i < kSymbols.size(); ++i) {
    if (kSymbols[i] == sym) return static_cast<Param>(i + 1);
  }
  // RHST is also written HOST and TSYS as TSY; accept both spellings.
  if (sym == "HOST") return Param::RHST;
  if (sym == "TSY") return Param::TSYS;
  return std::nullopt;
}

Param parse_param(std::string_view sym) {
  if (auto p = find_param(sym)) return *p;
  throw ParseError(fmt::format("unknown parameter symbol '{}'", sym));
}

const std::array<Param, kRatedCount>& rated_params() {
  static const std::array<Param, kRatedCount> params = [] {
    std::array<Param, kRatedCount> out{};
    for (int i = 0; i < kRatedCount; ++i) out[static_cast<std::size_t>(i)] = static_cast<Param>(i + 1);
    return out;
  }();
  return params;
}

std::string_view to_string(Direction d) {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

Direction parse_direction(std::string_view text) {
  if (text == "increasing") return Direction::increasing;
  if (text == "decreasing") return Direction::decreasing;
  throw ParseError(fmt::format("unknown direction '{}' (expected increasing|decreasing)", text));
}

double ParameterValues::at(Param p) const {
  if (!has(p)) throw LookupError(fmt::format("missing value for parameter {}", symbol(p)));
  return values_[static_cast<std::size_t>(slot_of(p))];
}

IndexMap IndexMap::canonical() {
  IndexMap m;
  for (int i = 0; i < kRatedCount; ++i) m.index_[static_cast<std::size_t>(i)] = i + 1;
  return m;
}

Param IndexMap::param(int index) const {
  for (int i = 0; i < kRatedCount; ++i) {
    if (index_[static_cast<std::size_t>(i)] == index) return static_cast<Param>(i + 1);
  }
  throw RangeError(fmt::format("no rated parameter carries index {}", index));
}

IndexMap IndexMap::with_index(Param p, int index) const {
  if (!is_rated(p)) throw RangeError("SIBR is not a rated parameter");
  if (index < 1 || index > kRatedCount) {
    throw RangeError(fmt::format("parameter index {} outside [1, {}]", index, kRatedCount));
  }
  if ((p == Param::D) != (index == index_of(Param::D))) {
    throw RangeError("staffing complexity D must keep index 34");
  }
  IndexMap out = *this;
  const Param holder = param(index);
  std::swap(out.index_[static_cast<std::size_t>(slot_of(p))],
            out.index_[static_cast<std::size_t>(slot_of(holder))]);
  return out;
}

}  // namespace seernf
