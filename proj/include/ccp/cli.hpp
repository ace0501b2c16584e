#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccp/popularity.hpp"

namespace ccp::cli {

enum class BackendChoice { Auto, Exact, Float };

struct PopularitySource {
  std::optional<std::string> file;
  std::optional<int> uniform;
};

using AnyPopularity = std::variant<Popularity<Rational>, Popularity<double>>;

// Reads {"probabilities": [...]} or {"uniform": n}. With BackendChoice::Auto
// the exact backend is used unless some entry is a decimal.
AnyPopularity load_popularity_json(const std::string& text, BackendChoice backend,
                                   bool renormalize);

AnyPopularity load_popularity(const PopularitySource& source, BackendChoice backend,
                              bool renormalize);

// Runs one command line (args excludes the program name). Returns the
// process exit code: 0 success, 1 invalid input, 2 identity violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccp::cli
