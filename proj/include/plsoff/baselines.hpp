#pragma once

#include <array>
#include <string_view>

#include "plsoff/ao_driver.hpp"

namespace plsoff {

enum class SchemeId {
  kProposed,
  kCtp,    // every device at p_max; compute split and offloading optimized
  kUcc,    // uniform compute split over the offloading set
  kFlc,    // everything local
  kNoEve,  // proposed solver with the eavesdropper removed
};

inline constexpr std::array<SchemeId, 5> kAllSchemes{SchemeId::kProposed, SchemeId::kCtp, SchemeId::kUcc,
                                                     SchemeId::kFlc, SchemeId::kNoEve};

std::string_view scheme_name(SchemeId id);
SchemeId parse_scheme(std::string_view name);

/// Scenario with g_est = eps = 0.
Scenario without_eavesdropper(const Scenario& s);

SolveReport run_scheme(SchemeId scheme, const Scenario& s, const AoSettings& settings = {});

}  // namespace plsoff
