#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace condsheaf {

struct CheckLine {
  std::string name;
  bool pass = false;
  std::uint64_t count = 0;   // items exercised by the check
  std::string detail;        // witness on failure, summary otherwise
};

/// Deterministic result of a verification command: same inputs, same bytes.
/// Neither rendering embeds the elapsed time; it stays a data field so
/// callers can enforce runtime budgets.
struct Report {
  std::string command;
  std::string inputs_digest;
  std::vector<CheckLine> checks;
  double elapsed_seconds = 0.0;

  void add(std::string name, bool pass, std::uint64_t count = 0, std::string detail = {});
  bool all_pass() const;
  std::string to_text() const;
  std::string to_json_text() const;
};

std::uint64_t fnv1a(std::string_view s);
std::string fnv1a_hex(std::string_view s);

}  // namespace condsheaf
