#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace umlmc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters supplied by the caller. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state handed to a kernel does not have the kernel's dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Failure confined to a single replication. The harness counts these by
/// reason() and excludes them from the moments; they are never averaged in.
class ReplicationError : public Error {
 public:
  ReplicationError(std::string reason, const std::string& what)
      : Error(what), reason_(std::move(reason)) {}

  const std::string& reason() const noexcept { return reason_; }

  /// Outer draw that was being conditioned on when the failure happened
  /// (empty outside the nested estimator).
  const std::vector<double>& conditioning() const noexcept { return conditioning_; }
  void set_conditioning(std::vector<double> x) { conditioning_ = std::move(x); }

 private:
  std::string reason_;
  std::vector<double> conditioning_;
};

/// Coupled chains did not meet within max_steps.
class MeetingCapError : public ReplicationError {
 public:
  explicit MeetingCapError(const std::string& what) : ReplicationError("meeting_cap", what) {}
};

/// g was about to be evaluated outside its domain.
class DomainError : public ReplicationError {
 public:
  DomainError(std::vector<double> point, const std::string& what)
      : ReplicationError("domain", what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// Sampled MLMC level exceeded max_level.
class LevelCapError : public ReplicationError {
 public:
  LevelCapError(int level, const std::string& what)
      : ReplicationError("level_cap", what), level_(level) {}

  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// Log target was not finite at the current state of a chain.
class NonFiniteTargetError : public ReplicationError {
 public:
  explicit NonFiniteTargetError(const std::string& what)
      : ReplicationError("non_finite_target", what) {}
};

/// The evaluated test function overflowed (e.g. exp(theta * H) on a large lattice).
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace umlmc
