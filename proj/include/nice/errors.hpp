#pragma once

#include <stdexcept>
#include <string>

namespace niceaug {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad or missing configuration (paths, schema, flag combinations).
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Filesystem / codec failures.
class IoError : public Error {
  public:
    using Error::Error;
};

// Request for a non-lossless image format or other format-policy violation.
class FormatError : public Error {
  public:
    using Error::Error;
};

// Rasters with incompatible dimensions fed to an operation that requires equality.
class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
  public:
    using Error::Error;
};

// No detected object overlaps the target phrase; the frame must be skipped.
class TargetNotFoundError : public Error {
  public:
    TargetNotFoundError(std::string frame_id, const std::string& what)
        : Error(what), frame_id_(std::move(frame_id)) {}
    const std::string& frame_id() const { return frame_id_; }

  private:
    std::string frame_id_;
};

// Failure from a model backend. `retriable` distinguishes transient transport /
// 5xx conditions from permanent protocol or 4xx errors.
class BackendError : public Error {
  public:
    BackendError(const std::string& what, bool retriable, std::string frame_id = {})
        : Error(what), retriable_(retriable), frame_id_(std::move(frame_id)) {}
    bool retriable() const { return retriable_; }
    const std::string& frame_id() const { return frame_id_; }

  private:
    bool retriable_;
    std::string frame_id_;
};

// Suggester could not produce a usable suggestion; editors fall back to the
// same-category strategy when they see this.
class SuggestionError : public Error {
  public:
    using Error::Error;
};

}  // namespace niceaug
