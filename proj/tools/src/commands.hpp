// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "run_config.hpp"

namespace rnnf::cli {

void cmd_ingest(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_compare(const RunConfig& cfg);
void cmd_transfer(const RunConfig& cfg);
void cmd_explain(const RunConfig& cfg);
void cmd_forecast(const RunConfig& cfg);

} // namespace rnnf::cli
