// Copyright 2026 The ESBQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESBQ_COST_MODEL_H_
#define ESBQ_COST_MODEL_H_

#include <cstdint>

#include "esbq/quant_config.h"

namespace esbq {

// Operation-count model of a shift-add multiplier for ESB operands: the
// integer significands have k+1 bits, so one product costs at most k+1
// shift-accumulate steps.
struct ShiftAddCost {
  int multiplier_bits = 1;
  int shift_adds_per_product = 1;
  std::uint64_t total_shift_adds = 0;
};

ShiftAddCost shiftadd_cost(const QuantConfig& config, std::uint64_t macs);

}  // namespace esbq

#endif  // ESBQ_COST_MODEL_H_
