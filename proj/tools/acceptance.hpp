#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace conewave::cli {

enum class Status { pass, fail, info };
const char* status_name(Status s) noexcept;

struct AcceptanceRow {
  std::string id;  // "AT-1" .. "AT-7", "AT-7(iii)"
  Status status = Status::fail;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  std::map<std::string, double> tol;  // overrides of default_tolerances()
  std::vector<std::string> only;      // empty: all
};

std::map<std::string, double> default_tolerances();

// Runs AT-1..AT-7; AT-7 yields two rows, the second (part iii) always INFO.
std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opt);

std::string format_row(const AcceptanceRow& r);
bool all_passed(const std::vector<AcceptanceRow>& rows);

} // namespace conewave::cli
