// Copyright 2026 The GeomForge Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace geomforge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GEOMFORGE_DEFINE_ERROR(Name)    \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

GEOMFORGE_DEFINE_ERROR(GenerationExhausted);
GEOMFORGE_DEFINE_ERROR(ParamOutOfRange);
GEOMFORGE_DEFINE_ERROR(DegenerateAngle);
GEOMFORGE_DEFINE_ERROR(NotTangential);
GEOMFORGE_DEFINE_ERROR(CanvasOverflow);
GEOMFORGE_DEFINE_ERROR(NoTemplate);
GEOMFORGE_DEFINE_ERROR(DimensionMismatch);
GEOMFORGE_DEFINE_ERROR(DegenerateResult);
GEOMFORGE_DEFINE_ERROR(InvalidPolygon);
GEOMFORGE_DEFINE_ERROR(InvalidElementId);
GEOMFORGE_DEFINE_ERROR(ManifestMismatch);
GEOMFORGE_DEFINE_ERROR(ConfigError);
GEOMFORGE_DEFINE_ERROR(IoError);

#undef GEOMFORGE_DEFINE_ERROR

}  // namespace geomforge
