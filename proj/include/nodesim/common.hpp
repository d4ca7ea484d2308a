/*
 * Copyright 2026 The nodesim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nodesim {

inline constexpr const char* kVersion = "1.0.0";

using Bytes = std::vector<uint8_t>;

// Domain error hierarchy; every name maps 1:1 to a documented failure mode.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define NODESIM_ERROR(Name)                       \
  struct Name : Error {                           \
    explicit Name(const std::string& msg = #Name) \
        : Error(std::string(#Name) + ": " + msg) {} \
  }

NODESIM_ERROR(NonBlockAlignedLength);
NODESIM_ERROR(RoundIndexOutOfRange);
NODESIM_ERROR(KeyIvOverflow);
NODESIM_ERROR(WeightOutOfRange);
NODESIM_ERROR(ImageSmallerThanFilter);
NODESIM_ERROR(DimensionMismatch);
NODESIM_ERROR(UnsupportedFilterSize);
NODESIM_ERROR(VddOutOfRange);
NODESIM_ERROR(UnknownKernel);
NODESIM_ERROR(UnknownUnit);
NODESIM_ERROR(UnknownMemory);
NODESIM_ERROR(TileInfeasible);
NODESIM_ERROR(CyclicDependency);
NODESIM_ERROR(PeriodTooShort);
NODESIM_ERROR(UnknownUseCase);

#undef NODESIM_ERROR

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

}  // namespace nodesim
