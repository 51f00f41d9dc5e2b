// Copyright 2026 The gkpzne Authors
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

#include "gkpzne/error.hpp"

namespace gkpzne {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::CutoffTooSmall: return "cutoff-too-small";
    case ErrorKind::NotHermitian: return "not-hermitian";
    case ErrorKind::NotPsd: return "not-psd";
    case ErrorKind::Parameter: return "parameter-error";
    case ErrorKind::DegenerateEnvelope: return "degenerate-envelope";
    case ErrorKind::CodewordsCollinear: return "codewords-collinear";
    case ErrorKind::CalibrationFailed: return "calibration-failed";
    case ErrorKind::NumericalInstability: return "numerical-instability";
    case ErrorKind::PhysicalBounds: return "physical-bounds-violation";
    case ErrorKind::Validation: return "validation-error";
    case ErrorKind::Schedule: return "schedule-error";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::FitFailed: return "fit-failed";
    case ErrorKind::Config: return "config-error";
  }
  return "unknown-error";
}

}  // namespace gkpzne
