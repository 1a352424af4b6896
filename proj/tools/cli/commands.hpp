#pragma once

#include "cli.hpp"

#include <iosfwd>

namespace apir::cli {

void cmd_gen(const RunConfig& config, std::ostream& out);
void cmd_simulate(const RunConfig& config, std::ostream& out);
void cmd_recover(const RunConfig& config, std::ostream& out);
void cmd_compare(const RunConfig& config, std::ostream& out);

}  // namespace apir::cli
