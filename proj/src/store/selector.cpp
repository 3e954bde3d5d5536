#include "alertlens/store/selector.hpp"

#include <algorithm>
#include <array>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"

namespace alertlens {
namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
constexpr std::string_view kPrefix = "h1.";

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string check_of(std::string_view body, std::string_view fingerprint) {
  std::string material(body);
  material += '|';
  material += fingerprint;
  return to_hex(fnv1a(material));
}

}  // namespace

Selector canonical(Selector s) {
  sort_unique(s.users);
  sort_unique(s.policies);
  sort_unique(s.resources);
  if (s.resources.empty()) s.permissive = false;
  return s;
}

void to_json(Json& j, const Selector& s) {
  j = Json{{"start", s.range.start}, {"end", s.range.end}};
  if (!s.users.empty()) j["users"] = s.users;
  if (!s.policies.empty()) j["policies"] = s.policies;
  if (s.hour) j["hour"] = *s.hour;
  if (!s.resources.empty()) {
    j["resources"] = s.resources;
    j["permissive"] = s.permissive;
  }
}

void from_json(const Json& j, Selector& s) {
  s = Selector{};
  s.range.start = j.at("start").get<Timestamp>();
  s.range.end = j.at("end").get<Timestamp>();
  if (j.contains("users")) s.users = j.at("users").get<std::vector<std::string>>();
  if (j.contains("policies")) s.policies = j.at("policies").get<std::vector<std::string>>();
  if (j.contains("hour")) s.hour = j.at("hour").get<int>();
  if (j.contains("resources")) s.resources = j.at("resources").get<std::vector<std::string>>();
  if (j.contains("permissive")) s.permissive = j.at("permissive").get<bool>();
}

std::string encode_handle(const Selector& s, std::string_view exclusion_fingerprint) {
  const std::string body = base64url_encode(Json(canonical(s)).dump());
  std::string out(kPrefix);
  out += body;
  out += '.';
  out += check_of(body, exclusion_fingerprint);
  return out;
}

Selector decode_handle(std::string_view handle, std::string_view exclusion_fingerprint) {
  if (!handle.starts_with(kPrefix)) throw Error(ErrorCode::kHandle, "not a selection handle");
  handle.remove_prefix(kPrefix.size());
  const auto dot = handle.rfind('.');
  if (dot == std::string_view::npos) throw Error(ErrorCode::kHandle, "malformed selection handle");
  const std::string_view body = handle.substr(0, dot);
  const std::string_view check = handle.substr(dot + 1);
  Selector s;
  try {
    s = Json::parse(base64url_decode(body)).get<Selector>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kHandle, std::string("undecodable selection handle: ") + e.what());
  }
  if (check != check_of(body, exclusion_fingerprint)) {
    throw Error(ErrorCode::kStaleHandle, "selection handle was issued under a different exclusion set");
  }
  return s;
}

std::string base64url_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::uint32_t acc = 0;
  int bits = 0;
  for (unsigned char c : bytes) {
    acc = (acc << 8) | c;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out += kAlphabet[(acc >> bits) & 0x3F];
    }
  }
  if (bits > 0) out += kAlphabet[(acc << (6 - bits)) & 0x3F];
  return out;
}

std::string base64url_decode(std::string_view text) {
  static const auto table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    for (std::size_t i = 0; i < kAlphabet.size(); ++i) t[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
    return t;
  }();
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (unsigned char c : text) {
    const int v = table[c];
    if (v < 0) throw Error(ErrorCode::kHandle, "invalid character in selection handle");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((acc >> bits) & 0xFF);
    }
  }
  return out;
}

}  // namespace alertlens
