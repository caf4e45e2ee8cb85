#pragma once

#include "cli_support.hpp"

namespace mkdv::cli {

void cmd_scatter(RunContext& ctx);
void cmd_spectrum(RunContext& ctx);
void cmd_predict(RunContext& ctx);
void cmd_exact(RunContext& ctx);
void cmd_simulate(RunContext& ctx);
void cmd_compare(RunContext& ctx);
/// Runs the invariant suite; returns the number of failed checks.
int cmd_selftest(RunContext& ctx);

}  // namespace mkdv::cli
