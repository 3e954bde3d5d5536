#include "alertlens/synth/default_policies.hpp"

#include <string>

namespace alertlens::synth {
namespace {

PolicyClause clause(ClauseAttribute attribute, ClauseOperator op, ClauseValue value) {
  return PolicyClause{attribute, op, std::move(value)};
}

using A = ClauseAttribute;
using O = ClauseOperator;
using Strings = std::vector<std::string>;

}  // namespace

std::vector<Policy> default_policies() {
  std::vector<Policy> out;
  out.push_back({std::string(policy_ids::kMedia), "Media file playback", 1,
                 {{clause(A::kResource, O::kContains, std::string(".mp3"))},
                  {clause(A::kResource, O::kContains, std::string(".mp4"))}}});
  out.push_back({std::string(policy_ids::kCloud), "Cloud storage upload", 2,
                 {{clause(A::kApplication, O::kOneOf, Strings{"onedrive.exe", "dropbox.exe", "googledrivesync.exe"}),
                   clause(A::kActivity, O::kOneOf, Strings{"create", "update"})}}});
  out.push_back({std::string(policy_ids::kDelete), "File deletion", 2,
                 {{clause(A::kActivity, O::kEquals, std::string("delete")),
                   clause(A::kResourceType, O::kEquals, std::string("file"))}}});
  out.push_back({std::string(policy_ids::kExeDownload), "Executable download", 2,
                 {{clause(A::kApplication, O::kOneOf, Strings{"chrome.exe", "msedge.exe", "firefox.exe"}),
                   clause(A::kResource, O::kContains, std::string(".exe"))}}});
  out.push_back({std::string(policy_ids::kPrint), "Document printing", 2,
                 {{clause(A::kApplication, O::kEquals, std::string("splwow64.exe"))}}});
  out.push_back({std::string(policy_ids::kScript), "Suspicious application usage", 3,
                 {{clause(A::kApplication, O::kOneOf, Strings{"wscript.exe", "cscript.exe", "powershell.exe"})}}});
  out.push_back({std::string(policy_ids::kUsb), "Removable media mounted", 3,
                 {{clause(A::kActivity, O::kEquals, std::string("mount")),
                   clause(A::kResourceType, O::kEquals, std::string("usb_device"))}}});
  out.push_back({std::string(policy_ids::kNightAccess), "Out-of-hours confidential access", 4,
                 {{clause(A::kHourOfDay, O::kHourInRange, HourRange{22, 5}),
                   clause(A::kResource, O::kContains, std::string("confidential"))}}});
  out.push_back({std::string(policy_ids::kWatchlistUsb), "Person of interest using USB storage", 5,
                 {{clause(A::kUser, O::kOneOf, Strings{std::string(kWatchlistUser)}),
                   clause(A::kActivity, O::kEquals, std::string("mount"))}}});
  return out;
}

}  // namespace alertlens::synth
