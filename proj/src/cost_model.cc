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

#include "esbq/cost_model.h"

namespace esbq {

ShiftAddCost shiftadd_cost(const QuantConfig& config, std::uint64_t macs) {
  ShiftAddCost cost;
  cost.multiplier_bits = config.sig() + 1;
  cost.shift_adds_per_product = config.sig() + 1;
  cost.total_shift_adds = static_cast<std::uint64_t>(cost.shift_adds_per_product) * macs;
  return cost;
}

}  // namespace esbq
