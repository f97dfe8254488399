#ifndef TWISTLAB_CLI_HPP
#define TWISTLAB_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/error.hpp"

namespace twistlab {

struct RunConfig {
  std::uint32_t p = 5;
  std::string A = "0,1";
  std::string B = "1";
  std::string command;
  int N = 2;
  std::optional<std::string> cls;
  int n_max = 4;
  double nu = 0.75;
  std::optional<unsigned> ell;
  std::string cache_dir;
  unsigned workers = 0;
  std::string format = "json";  // json | csv
  int max_deg = 6;
  std::optional<std::string> twist;
  std::vector<std::string> suites;
  std::string out_dir = "reports";
  bool allow_wide = false;
};

nlohmann::ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

// 2 validation, 3 budget, 4 failed check, 5 cache corruption.
int exit_code(ErrorCode code);

// Cache file for the a_P table of the configured curve to degree max_deg.
std::string ap_cache_path(const RunConfig& c, int max_deg);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twistlab

#endif  // TWISTLAB_CLI_HPP
