#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/rational.hpp"

namespace setpack {

// One row of the published (eps, xi) choices. `guarantee` is the rounded-up
// value listed for that k; the open-ended row (k >= 14) lists the linear
// bound 0.4986 (k + 1) + 0.0208 instead.
struct ConstantsRow {
  int k;
  Weight eps;
  Weight xi;
  Weight guarantee;
  bool open_ended = false;
};

/// 0.4986 (k + 1) + 0.0208.
inline Weight linear_guarantee_bound(int k) {
  return parse_weight("0.4986") * (k + 1) + parse_weight("0.0208");
}

inline const std::vector<ConstantsRow>& constants_table() {
  static const std::vector<ConstantsRow> rows = [] {
    struct Raw {
      int k;
      const char* eps;
      const char* xi;
      const char* guarantee;
    };
    constexpr std::array<Raw, 10> raw{{
        {4, "0.01422", "0.001764", "2.4998"},
        {5, "0.02674", "0.003298", "2.9990"},
        {6, "0.03466", "0.004258", "3.4980"},
        {7, "0.04013", "0.004917", "3.9968"},
        {8, "0.04415", "0.005399", "4.4955"},
        {9, "0.04723", "0.005767", "4.9941"},
        {10, "0.04966", "0.006057", "5.4928"},
        {11, "0.05164", "0.006292", "5.9914"},
        {12, "0.05328", "0.006487", "6.4899"},
        {13, "0.05465", "0.006649", "6.9885"},
    }};
    std::vector<ConstantsRow> out;
    for (const auto& r : raw) {
      out.push_back({r.k, parse_weight(r.eps), parse_weight(r.xi), parse_weight(r.guarantee), false});
    }
    out.push_back({14, parse_weight("0.084"), parse_weight("0.01"), linear_guarantee_bound(14), true});
    return out;
  }();
  return rows;
}

/// Row used for a given k. k <= 3 falls back to the k = 4 row; k >= 14 uses
/// the open-ended row with its guarantee evaluated at k.
inline ConstantsRow constants_for(int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const auto& rows = constants_table();
  if (k <= 4) return rows.front();
  if (k >= 14) {
    ConstantsRow r = rows.back();
    r.k = k;
    r.guarantee = linear_guarantee_bound(k);
    return r;
  }
  return rows[static_cast<std::size_t>(k - 4)];
}

/// kappa = 1 / ceil(1 / eps).
inline Weight kappa_for(const Weight& eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  return Weight(BigInt(1), ceil_of(Weight(1) / eps));
}

}  // namespace setpack
