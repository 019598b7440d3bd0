#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypdisk {

// Base of every library failure. name() is the stable machine-readable tag
// used by the CLI error record.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// phi reached (or came within the guard band of) 0 or pi.
class SingularAngleError : public Error {
 public:
  explicit SingularAngleError(const std::string& what)
      : Error("singular_angle", what) {}
};

class InconsistentFieldError : public Error {
 public:
  InconsistentFieldError(const std::string& what, double residual)
      : Error("inconsistent_field", what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class StartOnSingularityError : public Error {
 public:
  explicit StartOnSingularityError(const std::string& what)
      : Error("start_on_singularity", what) {}
};

// A geodesic disk of the requested radius leaves the regular part of the chart.
class BoundaryExceededError : public Error {
 public:
  BoundaryExceededError(const std::string& what, double requested,
                        double max_radius, double blocking_psi,
                        std::vector<double> attainable = {})
      : Error("boundary_exceeded", what),
        requested_(requested),
        max_radius_(max_radius),
        blocking_psi_(blocking_psi),
        attainable_(std::move(attainable)) {}
  double requested() const noexcept { return requested_; }
  double max_radius() const noexcept { return max_radius_; }
  double blocking_psi() const noexcept { return blocking_psi_; }
  // reached arclength per polar direction (requested radius where unblocked)
  const std::vector<double>& attainable() const noexcept { return attainable_; }

 private:
  double requested_;
  double max_radius_;
  double blocking_psi_;
  std::vector<double> attainable_;
};

class NoRootError : public Error {
 public:
  explicit NoRootError(const std::string& what) : Error("no_root", what) {}
};

// Validation of user supplied parameters before any computation.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("usage_error", what) {}
};

std::string format_error_json(const Error& e);

}  // namespace hypdisk
