// Copyright 2026 The kvnemu Authors
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

namespace kvn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define KVN_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

KVN_DEFINE_ERROR(OverflowError);      // exact integer arithmetic would wrap
KVN_DEFINE_ERROR(ContractError);      // caller broke a precondition
KVN_DEFINE_ERROR(TruncationError);    // occupancy exceeds the truncation order
KVN_DEFINE_ERROR(IndexError);         // basis index out of range
KVN_DEFINE_ERROR(DomainError);        // physical input outside the model domain
KVN_DEFINE_ERROR(ConfigurationError); // inconsistent grid / system / config
KVN_DEFINE_ERROR(ParameterError);     // numeric parameter out of range
KVN_DEFINE_ERROR(CapacityError);      // memory or workspace cap exceeded
KVN_DEFINE_ERROR(SpectralLeakError);  // ||H/alpha|| > 1
KVN_DEFINE_ERROR(DivergenceError);    // state collapsed or became non-finite
KVN_DEFINE_ERROR(DecodeError);        // vacuum amplitude vanished
KVN_DEFINE_ERROR(MeasurementError);   // not enough signal to measure
KVN_DEFINE_ERROR(FitDomainError);     // log-fit on non-positive data
KVN_DEFINE_ERROR(NumericalError);     // eigen-solver failure
KVN_DEFINE_ERROR(IoError);

#undef KVN_DEFINE_ERROR

/// Lanczos-type estimate that did not reach its tolerance.
class EstimationError : public Error {
public:
  EstimationError(const std::string &what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

private:
  double lower_;
  double upper_;
};

/// Krylov propagation that stopped above its tolerance.
class ToleranceError : public Error {
public:
  ToleranceError(const std::string &what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace kvn
