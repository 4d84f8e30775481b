#pragma once

#include <stdexcept>
#include <string>

namespace neurowf {

/// Malformed or out-of-contract input (empty samples, grid mismatch, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Covariate covariance matrix is not positive definite and no ridge was requested.
class SingularCovariance : public std::runtime_error {
public:
    explicit SingularCovariance(const std::string& what) : std::runtime_error(what) {}
};

/// Regression design matrix does not have full column rank.
class RankDeficient : public std::runtime_error {
public:
    explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace neurowf
