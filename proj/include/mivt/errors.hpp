#pragma once

#include <stdexcept>
#include <string>

namespace mivt {

/// Base class for all library errors.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to reach its requested tolerance.
class numeric_error : public error {
  public:
    numeric_error(const std::string& what, double achieved_tolerance)
        : error(what + " (achieved tolerance " + std::to_string(achieved_tolerance) + ")"),
          achieved_tolerance_(achieved_tolerance) {}

    [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_tolerance_; }

  private:
    double achieved_tolerance_;
};

/// A fit stage could not produce a usable estimate.
class fit_error : public error {
  public:
    fit_error(const std::string& what, double best_residual)
        : error(what), best_residual_(best_residual) {}
    explicit fit_error(const std::string& what) : fit_error(what, 0.0) {}

    [[nodiscard]] double best_residual() const noexcept { return best_residual_; }

  private:
    double best_residual_;
};

/// Observed data contradicts the requested model family (names the offending component).
class model_mismatch_error : public error {
  public:
    model_mismatch_error(const std::string& what, std::size_t component)
        : error(what), component_(component) {}

    [[nodiscard]] std::size_t component() const noexcept { return component_; }

  private:
    std::size_t component_;
};

/// A requested computation would exceed sane resource bounds.
class resource_error : public error {
  public:
    using error::error;
};

/// Too many bootstrap replicates failed to refit.
class bootstrap_error : public error {
  public:
    bootstrap_error(const std::string& what, std::size_t failures, std::size_t reps)
        : error(what), failures_(failures), reps_(reps) {}

    [[nodiscard]] std::size_t failures() const noexcept { return failures_; }
    [[nodiscard]] std::size_t reps() const noexcept { return reps_; }

  private:
    std::size_t failures_;
    std::size_t reps_;
};

}  // namespace mivt
