#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrdcma {

/**
 * @brief Command-line entry point.
 *
 * Returns 0 on success, 1 on usage or validation errors and 2 on numeric failures.
 * All outputs of a command are staged in memory and written together with
 * manifest.json only after the command succeeded.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

// Human-readable report of an `experiment run` summary (JSON text).
[[nodiscard]] std::string render_report(const std::string& summary_json);

}  // namespace lrdcma
