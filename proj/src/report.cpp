#include "condsheaf/report.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace condsheaf {

void Report::add(std::string name, bool pass, std::uint64_t count, std::string detail) {
  checks.push_back({std::move(name), pass, count, std::move(detail)});
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "== " << command << " (inputs " << inputs_digest << ") ==\n";
  for (const auto& c : checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (c.count) os << "  [" << c.count << " checked]";
    if (!c.detail.empty()) os << "  -- " << c.detail;
    os << "\n";
  }
  os << (all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
  return os.str();
}

std::string Report::to_json_text() const {
  nlohmann::json j;
  j["command"] = command;
  j["inputs_digest"] = inputs_digest;
  j["pass"] = all_pass();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json line;
    line["name"] = c.name;
    line["pass"] = c.pass;
    line["count"] = c.count;
    line["detail"] = c.detail;
    arr.push_back(line);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";  // nlohmann emits object keys sorted
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a_hex(std::string_view s) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(s);
  return os.str();
}

}  // namespace condsheaf
