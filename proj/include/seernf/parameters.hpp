#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string_view>

namespace seernf {

/// SEER-SEM effort parameters. The enumerator value is the canonical index
/// P_i; indices 1..34 are rated, 35 (SIBR) is entered as a fraction.
enum class Param : std::uint8_t {
  ACAP = 1,
  AEXP = 2,
  PCAP = 3,
  LEXP = 4,
  DEXP = 5,
  TEXP = 6,
  PEXP = 7,
  MODP = 8,
  TOOL = 9,
  TURN = 10,
  TERM = 11,
  MULT = 12,
  RDED = 13,
  RLOC = 14,
  DSVL = 15,
  PSVL = 16,
  RVOL = 17,
  SPEC = 18,
  TEST = 19,
  QUAL = 20,
  RHST = 21,
  REUS = 22,
  LANG = 23,
  DSY = 24,
  APPL = 25,
  PSYS = 26,
  DISP = 27,
  MEMC = 28,
  TIMC = 29,
  RTIM = 30,
  TSYS = 31,
  TSVL = 32,
  SECR = 33,
  D = 34,
  SIBR = 35,
};

inline constexpr int kRatedCount = 34;
inline constexpr int kParamCount = 35;

constexpr int index_of(Param p) { return static_cast<int>(p); }

/// Zero-based slot of a rated parameter in per-parameter arrays.
constexpr int slot_of(Param p) { return static_cast<int>(p) - 1; }

/// Parameter with canonical index `index` (1..35). Throws RangeError.
Param param_at(int index);

std::string_view symbol(Param p);
std::optional<Param> find_param(std::string_view symbol);
/// Like find_param but throws ParseError naming the token.
Param parse_param(std::string_view symbol);

constexpr bool is_rated(Param p) { return p != Param::SIBR; }

/// All 34 rated parameters in canonical index order.
const std::array<Param, kRatedCount>& rated_params();

enum class Direction : std::uint8_t { increasing, decreasing };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// Quantitative values P_i keyed by parameter, with presence tracking so
/// that evaluation can report which input is missing.
class ParameterValues {
 public:
  ParameterValues() = default;

  void set(Param p, double value) {
    values_[slot_of(p)] = value;
    present_.set(static_cast<std::size_t>(slot_of(p)));
  }
  bool has(Param p) const { return present_.test(static_cast<std::size_t>(slot_of(p))); }
  /// Throws LookupError naming the symbol when absent.
  double at(Param p) const;

 private:
  std::array<double, kParamCount> values_{};
  std::bitset<kParamCount> present_;
};

/// Symbol → P_i numbering used when tables are written or displayed. The
/// canonical map is the enumerator order; overrides (e.g. swapping SECR and
/// TSVL) must remain a bijection onto 1..34 with D fixed at 34.
class IndexMap {
 public:
  static IndexMap canonical();

  int index(Param p) const { return index_[slot_of(p)]; }
  Param param(int index) const;

  /// Returns a copy with `p` renumbered to `index`; the parameter that held
  /// `index` takes p's old number. Throws RangeError on invalid requests.
  IndexMap with_index(Param p, int index) const;

 private:
  std::array<int, kRatedCount> index_{};
};

}  // namespace seernf
