#pragma once

#include <string_view>
#include <vector>

#include "alertlens/core/model.hpp"

namespace alertlens::synth {

// Policy ids the generator and scenarios rely on.
namespace policy_ids {
inline constexpr std::string_view kMedia = "POL-MEDIA";
inline constexpr std::string_view kCloud = "POL-CLOUD";
inline constexpr std::string_view kDelete = "POL-DELETE";
inline constexpr std::string_view kExeDownload = "POL-EXEDL";
inline constexpr std::string_view kPrint = "POL-PRINT";
inline constexpr std::string_view kScript = "POL-SCRIPT";
inline constexpr std::string_view kUsb = "POL-USB";
inline constexpr std::string_view kNightAccess = "POL-NIGHT";
inline constexpr std::string_view kWatchlistUsb = "POL-POI-USB";
}  // namespace policy_ids

// Watch-listed account referenced by the top-severity USB policy.
inline constexpr std::string_view kWatchlistUser = "s-poi";

std::vector<Policy> default_policies();

}  // namespace alertlens::synth
