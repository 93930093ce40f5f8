#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qdm {

// Base error carrying the pipeline stage that raised it. The CLI maps each
// subclass to a distinct nonzero exit code.
class Error : public std::runtime_error {
  public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

class ParameterError : public Error {
  public:
    using Error::Error;
};

class IngestError : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

// Phase register cannot resolve the requested value; carries a usable bit count.
class ResolutionError : public Error {
  public:
    ResolutionError(std::string stage, const std::string& what, int suggested_bits)
        : Error(std::move(stage), what + " (suggest n_b >= " + std::to_string(suggested_bits) + ")"),
          suggested_bits(suggested_bits) {}
    int suggested_bits;
};

// Measured deviation exceeded the accuracy budget; message carries the scan rows.
class AccuracyError : public Error {
  public:
    using Error::Error;
};

class CapacityError : public Error {
  public:
    using Error::Error;
};

class ExtractionError : public Error {
  public:
    using Error::Error;
};

} // namespace qdm
